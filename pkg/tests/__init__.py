# Test package for the nested graph engine
