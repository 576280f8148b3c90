"""Extension tests for lnat."""
