"""Exact computations with finite linear and DG categories under finite group actions."""

__version__ = "0.1.0"
