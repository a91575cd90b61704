"""Test package for the hyperbolic defect toolkit."""
