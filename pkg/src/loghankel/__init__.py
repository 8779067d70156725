"""Logarithmic coefficients, Hankel determinants and bound verification for S*_S and K_S."""

__version__ = "0.1.0"
