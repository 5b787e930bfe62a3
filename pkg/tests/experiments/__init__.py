"""Experiment config, suite and report tests."""
