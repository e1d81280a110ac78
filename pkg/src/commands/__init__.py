# Command Routers Package
