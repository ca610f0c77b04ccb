"""Hybrid continuous-variable / dual-rail Deutsch-Jozsa simulator."""

__version__ = "0.1.0"
