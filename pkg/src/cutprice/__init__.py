"""Exact equilibrium pricing for combinatorial auctions."""

__version__ = "0.1.0"
