"""Adversary tests for lnat."""
