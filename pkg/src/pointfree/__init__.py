"""Exact finite computations with frames, valuation sites and inner measures."""

from __future__ import annotations

from .errors import PointfreeError
from .frame import FiniteFrame, FrameMap
from .order import BooleanLattice, FiniteLattice, build_lattice, chain_lattice, powerset_lattice
from .site import CoverageKind, Site
from .valuation import Valuation, check_valuation

__version__ = "0.1.0"

__all__ = [
    "BooleanLattice",
    "CoverageKind",
    "FiniteFrame",
    "FiniteLattice",
    "FrameMap",
    "PointfreeError",
    "Site",
    "Valuation",
    "build_lattice",
    "chain_lattice",
    "check_valuation",
    "powerset_lattice",
    "__version__",
]
