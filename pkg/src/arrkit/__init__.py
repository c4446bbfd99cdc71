"""Rational cohomology and CDGA models of arrangement complements."""

__version__ = "0.1.0"
