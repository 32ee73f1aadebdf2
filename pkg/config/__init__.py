# config/__init__.py
# Package initialization
