"""Application tests for lnat."""
