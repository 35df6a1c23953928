"""Exact parametrization of conics and Del Pezzo surfaces via Lie algebras."""

__version__ = "0.1.0"
