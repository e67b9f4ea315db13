"""Exact and approximate Markovian testing equivalence checking."""

__version__ = "0.1.0"
