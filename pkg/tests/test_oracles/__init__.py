"""Oracle tests for lnat."""
