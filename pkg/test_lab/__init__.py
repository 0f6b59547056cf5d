"""pytest won't search `test_lab/` if there is no `__init__.py` file."""
