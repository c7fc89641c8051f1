"""Numerical toolkit for weighted Fourier inequalities on rank-one symmetric spaces."""

__version__ = "0.1.0"
