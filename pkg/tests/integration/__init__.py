"""Integration test package for end-to-end pipeline scenarios."""
