"""Exact computations with GL-equivariant modules over the infinite exterior algebra in characteristic p."""

__version__ = "0.1.0"
