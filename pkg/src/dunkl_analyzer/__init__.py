"""Numerical toolkit for weighted Dunkl/Bessel harmonic analysis on radial profiles."""

__version__ = "0.1.0"
