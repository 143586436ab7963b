"""Alternating knot diagrams realizing Dehn fillings of simple 3-fold branched covers."""

__version__ = "0.1.0"
