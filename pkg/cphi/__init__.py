"""cphi - numerical workbench for hyperbolic composition operators on H^2."""

__version__ = "0.1.0"
