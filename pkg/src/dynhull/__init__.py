"""Exact geometric kernel built on dynamic determinant updates."""

__version__ = "0.1.0"
