# Package marker for services module
