"""H^2 function tests."""
