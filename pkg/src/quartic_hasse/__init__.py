"""Smooth plane quartics over Q violating the Hasse principle for bitangents
and for symmetric determinantal representations, with exact certificates."""

__version__ = "0.1.0"
