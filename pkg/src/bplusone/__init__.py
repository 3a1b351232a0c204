"""Exact Donaldson invariants of b+ = 1 surfaces at boundary period points."""

__version__ = "0.1.0"
