"""Khovanov homology, cables and the colored Khovanov bicomplex of link diagrams."""

__version__ = "0.1.0"
