"""Spectrum tests."""
