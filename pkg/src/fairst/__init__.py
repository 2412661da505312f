"""Fairness-aware spatiotemporal demand forecasting on city grids."""

__version__ = "0.1.0"
