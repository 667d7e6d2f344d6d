"""Stacky CDGA resolutions, Poisson structures and quantizations of T*[X/G]."""

__version__ = "0.1.0"
