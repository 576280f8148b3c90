"""Chain tests for lnat."""
