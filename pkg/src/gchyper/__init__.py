"""Generalized complex and hypercomplex structures on V + V*, computed exactly."""

__version__ = "0.1.0"
