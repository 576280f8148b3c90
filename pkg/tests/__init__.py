"""Test suite for lnat."""
