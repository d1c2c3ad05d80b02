"""Lines of PG(4, q) by serial number, and q-added maximal partial spreads."""

__version__ = "0.1.0"
