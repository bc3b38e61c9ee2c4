"""Generalized Laplace-Runge-Lenz conserved vectors for central potentials.

Closed-form (h, g) field pairs per potential family, landmark root finding,
an independent integration oracle, and a CLI for reproducible trajectory
and verification runs.
"""

from .backend import BACKEND_NAME

__all__ = ["BACKEND_NAME"]
__version__ = "0.1.0"
