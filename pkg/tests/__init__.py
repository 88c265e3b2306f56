"""
Test suite for the neck-lab numerical laboratory.
"""
