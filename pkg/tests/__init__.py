"""Test suite for cphi."""
