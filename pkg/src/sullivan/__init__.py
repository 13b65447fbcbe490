"""Exact computations with minimal Sullivan algebras over the rationals."""

__version__ = "0.1.0"
