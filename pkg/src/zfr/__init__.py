"""Explicit zero-free regions for Dedekind zeta-functions."""

__version__ = "0.1.0"
