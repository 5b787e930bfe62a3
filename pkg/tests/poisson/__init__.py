"""Poisson kernel tests."""
