"""Smoothness of Schubert varieties via patterns in root subsystems."""

__version__ = "0.1.0"
