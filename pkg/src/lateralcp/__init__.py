"""Lateral dipole and nonretarded Casimir-Polder forces above corrugated grounded conductors."""

__version__ = "0.1.0"
