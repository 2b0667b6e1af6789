"""Exception hierarchy.

Every error that refers to concrete lattice elements carries them in
``witness`` so callers (and the CLI) can print a reproducible diagnosis.
"""

from __future__ import annotations

from typing import Any


class PointfreeError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


# order core
class LatticeError(PointfreeError):
    pass


class CycleError(LatticeError):
    pass


class MissingBoundError(LatticeError):
    pass


class NotDistributiveError(LatticeError):
    pass


class NoTopError(LatticeError):
    pass


class NotLatticeHom(LatticeError):
    pass


# sites and frames
class CapExceeded(PointfreeError):
    pass


class NotDownwardClosed(PointfreeError):
    pass


class NotCoveringPreserving(PointfreeError):
    pass


class NotMeetPreserving(PointfreeError):
    pass


# valuations
class ValuationError(PointfreeError):
    pass


class NonzeroBottom(ValuationError):
    pass


class NotMonotone(ValuationError):
    pass


class NotModular(ValuationError):
    pass


class RestrictionMismatch(ValuationError):
    pass


class NotFaithfulInput(ValuationError):
    pass


# geometry
class ScopeError(PointfreeError):
    pass


class DimMismatch(PointfreeError):
    pass


# input files
class ParseError(PointfreeError):
    def __init__(self, message: str, location: str | None = None, witness: Any = None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message, witness)
        self.location = location
