"""Workbench for hybrid branching-time logics."""

__version__ = "0.1.0"
