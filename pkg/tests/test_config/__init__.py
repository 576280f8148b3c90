"""Configuration tests for lnat."""
