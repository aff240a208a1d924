"""Exact and simulated expected lengths of reach-restricted longest common subsequences."""

__version__ = "0.1.0"
