"""Regression tests against a stored golden report."""
