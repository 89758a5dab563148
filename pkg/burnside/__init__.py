"""Burnside rings, I(G)-adic completions and stable splittings of classifying spaces."""

__version__ = "0.1.0"
