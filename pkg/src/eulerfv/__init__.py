"""Finite-volume Godunov/VFV solver for the compressible Euler equations with
relative-energy error diagnostics."""

from .gas import ConsState, GasLaw, NonPhysicalState, PrimState
from .grid import CellField, StructMesh

__all__ = ["CellField", "ConsState", "GasLaw", "NonPhysicalState", "PrimState", "StructMesh"]
