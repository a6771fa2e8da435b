"""Accelerated stochastic variance-reduced ADMM and its baselines."""

__version__ = "0.1.0"
