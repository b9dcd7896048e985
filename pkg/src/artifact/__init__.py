"""Cubic graphs as covers of cyclic generalised voltage graphs."""

__version__ = "0.1.0"
