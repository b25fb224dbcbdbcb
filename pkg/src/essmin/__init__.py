"""Bounds for the essential minimum of h(alpha) + h(a*alpha + b)."""

__version__ = "0.1.0"
