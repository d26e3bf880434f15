# Package marker for app module
