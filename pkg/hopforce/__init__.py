"""Hopping forcing, propagation time and throttling on small graphs"""

__version__ = "1.0.0"
