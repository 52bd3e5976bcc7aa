"""Fermionic LDPC codes: construction, simulation, surgery and decoding."""

__version__ = "0.1.0"
