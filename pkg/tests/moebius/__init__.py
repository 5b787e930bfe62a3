"""Möbius map tests."""
