"""Cyclic polygon defects, centered dual tessellations and genus-two surfaces."""

__version__ = "0.1.0"
