"""Cyclically covering subspaces of F_q^n: predicates, search and bounds."""

__version__ = "0.1.0"
