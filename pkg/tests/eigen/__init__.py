"""Eigenfunction construction tests."""
