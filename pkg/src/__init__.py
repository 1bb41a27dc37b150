"""
Dunkl Analyzer - weighted Bessel/Dunkl harmonic analysis on radial profiles
"""

__version__ = "0.1.0"
