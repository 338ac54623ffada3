"""Dyadic Orbits - Rigorous orbit-growth analysis for the binary dynamical system."""

__version__ = "0.1.0"
