"""Blind nonlinear spectral unmixing with a constrained autoencoder."""

__version__ = "0.1.0"
