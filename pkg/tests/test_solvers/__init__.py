"""Solver tests for lnat."""
