"""Combinatorial curve pairs, train tracks and coarse graph diagnostics."""

__version__ = "0.1.0"
