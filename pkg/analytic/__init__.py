# analytic/__init__.py
# Package initialization
