# Services Layer Package 