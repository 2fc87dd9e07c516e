"""Leakage-safe credit scoring: text-derived risk score plus Newton-boosted
trees, with a genetic hyperparameter search and a statistics battery."""

__version__ = "0.1.0"
