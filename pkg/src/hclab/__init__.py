"""Exact computations with Hecke algebras, Steinberg idempotents and Dickson-type invariants."""

__version__ = "0.1.0"
