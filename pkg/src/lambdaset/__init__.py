"""Certified computation of contraction-ratio sets of self-similar sets:
codings, covers, gaps, thickness, and dimension bounds."""

__version__ = "0.1.0"
