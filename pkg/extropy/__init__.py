"""Weighted cumulative past extropy toolkit."""

__version__ = "0.1.0"
