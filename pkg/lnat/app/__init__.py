"""lnat - online L-natural convex minimization."""

__version__ = "0.1.0"
