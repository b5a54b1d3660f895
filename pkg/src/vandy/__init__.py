"""Conditioning of Vandermonde matrices with nodes in the unit disk."""

__version__ = "0.1.0"
