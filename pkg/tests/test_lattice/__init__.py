"""Lattice tests for lnat."""
