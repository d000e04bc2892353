"""Exact computer algebra for Krichever-Novikov type current algebras and their central extensions."""

__version__ = "0.1.0"
