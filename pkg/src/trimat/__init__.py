"""Exact linear algebra for spaces of matrices whose characteristic
polynomials split over small exact coefficient fields."""

__version__ = "0.1.0"
