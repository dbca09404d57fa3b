"""Exact verification engine for parity-of-descent-position enumeration."""

__version__ = "0.1.0"
