# Package marker for routers module
