"""Exact skein-valued recursion engine for unknot and Hopf-link fillings."""

__version__ = "0.1.0"
