"""Gradual, temporal gradual and emerging gradual pattern mining."""

__version__ = "0.1.0"
