"""Constraint-based tile level generation with systematic
expressive-range exploration."""

__version__ = "0.1.0"
