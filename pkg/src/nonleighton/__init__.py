"""Verification toolkit for combinatorial 2-complexes and their coverings."""

__version__ = "0.1.0"
