# grid/__init__.py
# Package initialization
