"""Projection tests for lnat."""
