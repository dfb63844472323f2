"""Systematic search for extreme enstrophy and palinstrophy growth in
periodic 1D Burgers and 2D Navier-Stokes flows."""

__version__ = "0.1.0"
