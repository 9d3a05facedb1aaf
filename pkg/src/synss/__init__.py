"""Exact Adams spectral sequence toolchain for tmf at the prime 2."""

__version__ = "0.1.0"
