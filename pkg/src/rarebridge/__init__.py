"""Rare-bridge sparsification benchmark: effective resistance versus frequency."""

__version__ = "0.1.0"
