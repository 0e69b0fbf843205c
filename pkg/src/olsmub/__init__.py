"""Orthogonal Latin squares, net designs and mutually unbiased bases."""

__version__ = "0.1.0"
