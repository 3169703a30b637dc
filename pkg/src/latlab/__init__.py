"""Exact integral lattices, finite quadratic forms and 2-elementary K3 invariants."""

from .discforms import FiniteQuadraticForm, discriminant_form, isometry_group_order
from .dpn import DpnConfig, full_invariant
from .errors import (
    ConfigError,
    ConsistencyError,
    DegenerateLatticeError,
    LatticeError,
    NotEvenError,
    NotTwoElementaryError,
    OutOfScopeError,
    ParseError,
)
from .expr import lattice, parse, to_string
from .lattices import Lattice, isometric, main_invariant

__version__ = "0.1.0"

__all__ = [
    "FiniteQuadraticForm", "discriminant_form", "isometry_group_order",
    "DpnConfig", "full_invariant",
    "ConfigError", "ConsistencyError", "DegenerateLatticeError", "LatticeError", "NotEvenError",
    "NotTwoElementaryError", "OutOfScopeError", "ParseError",
    "lattice", "parse", "to_string", "Lattice", "isometric", "main_invariant",
]
