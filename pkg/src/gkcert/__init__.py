"""Exact certificates for low-minrank representations of generalized Kneser graphs."""

__version__ = "0.1.0"
