"""Exact computation of the Bousfield-Kan E2-term for the 3-local spectrum Q(2)."""

__version__ = "0.1.0"
