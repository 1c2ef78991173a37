"""Rigorous construction of the square-root spiral and a certified check
that no two of its hypotenuses are collinear."""

__version__ = "0.1.0"
