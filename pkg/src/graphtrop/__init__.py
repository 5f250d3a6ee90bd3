"""Exact tropical geometry of graph homomorphism density profiles."""

__version__ = "0.1.0"
