"""Ramification of iterated preimage fields of rational maps on the projective line."""

__version__ = "0.1.0"
