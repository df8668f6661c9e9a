"""Exact computations with FC-centres, centres and bounded automorphisms of
finitely generated groups that have solvable normal forms."""

__version__ = "0.1.0"
