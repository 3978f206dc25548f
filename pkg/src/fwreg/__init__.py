"""Partial group actions, universal globalization and regularization on finite models."""

__version__ = "0.1.0"
