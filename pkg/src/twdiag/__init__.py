"""Twisted diagrams over adjunction bundles, computed exactly."""

__version__ = "0.1.0"
