# utils/__init__.py
# Package initialization
