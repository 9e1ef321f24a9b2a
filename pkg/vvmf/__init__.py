"""Exact arithmetic for vector-valued modular functions built from (Lambda, X)."""

__version__ = "1.0.0"
