"""Command-line tests for lnat."""
