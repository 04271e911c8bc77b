"""Simulation and game-theoretic analysis of two-way QKD under eavesdropping."""

__version__ = "0.1.0"
