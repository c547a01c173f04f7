"""Grover-walk pulsation on Johnson-star and related wedge graphs."""

from .graph import (
    Graph,
    WedgeGraph,
    build_complete,
    build_hypercube,
    build_johnson,
    build_star,
    johnson_star,
    wedge,
)
from .reduction import build_reduced_walk, build_T, decompose, reduced_curve, stationary
from .spectral import lift, predict, principal_eigenpair, asymptotic_tau
from .walk import curve, evolve, step, uniform_initial

__version__ = "0.1.0"
