"""Exact workbench for semilinear representations of finitary symmetric groups."""

__version__ = "0.1.0"
