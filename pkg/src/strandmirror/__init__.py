"""Exact verification of the pair-of-pants mirror correspondence at desk scale."""

__version__ = "0.1.0"
