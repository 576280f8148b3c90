"""Experiment engine tests for lnat."""
