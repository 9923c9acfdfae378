"""Exact combinatorics for tropical curves, split types and toric Floer data."""

__version__ = "0.1.0"
