"""Finite stages of the coin-toss algebra and the Fat Cantor sequence.

Outcomes of a stage with ``b`` tosses are the integers ``0 <= x < 2**b``,
read as ``b``-bit strings with the first toss as the most significant bit, so
integer order is lexicographic order.  Subsets of outcomes are Python ints
used as bitmasks.  Forgetting the last tosses is a right shift.

Two gradings are supported: ``plain`` (stage ``n`` has ``n`` tosses) and
``fatcantor`` (stage ``n`` has ``n**2`` tosses).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceeded, PointfreeError
from .order import ENUMERATION_HARD_CAP, BooleanLattice, LatticeHom, bits, popcount
from .valuation import Valuation

PLAIN_STAGE_CAP = 16
FAT_CANTOR_STAGE_CAP = 4
NO_COMPLEMENT_STAGE_CAP = 3


def tosses(n: int, grading: str) -> int:
    if grading == "plain":
        return n
    if grading == "fatcantor":
        return n * n
    raise PointfreeError(f"unknown grading {grading!r}; use 'plain' or 'fatcantor'")


@dataclass(frozen=True)
class CoinStage:
    n: int
    grading: str

    @property
    def tosses(self) -> int:
        return tosses(self.n, self.grading)

    @property
    def ground(self) -> int:
        return 1 << self.tosses

    def measure(self, subset: int) -> Fraction:
        """Uniform probability of a set of outcomes."""
        return Fraction(popcount(subset), self.ground)

    def preimage(self, subset: int, later: "CoinStage") -> int:
        """Preimage of ``subset`` under the projection from a later stage."""
        shift = later.tosses - self.tosses
        if shift < 0:
            raise PointfreeError("preimage needs a later stage")
        block = (1 << (1 << shift)) - 1
        out = 0
        for y in bits(subset):
            out |= block << (y << shift)
        return out

    def site(self) -> Valuation:
        """The powerset of outcomes with the uniform valuation (small stages only)."""
        if (1 << self.ground) > ENUMERATION_HARD_CAP:
            raise CapExceeded(f"stage has {self.ground} outcomes; its powerset exceeds the enumeration cap",
                              witness=self.ground)
        lattice = BooleanLattice([format(x, f"0{self.tosses}b") if self.tosses else "()" for x in range(self.ground)])
        return Valuation.additive(lattice, [Fraction(1, self.ground)] * self.ground)


def coin_site(n: int, grading: str = "plain") -> CoinStage:
    cap = PLAIN_STAGE_CAP if grading == "plain" else FAT_CANTOR_STAGE_CAP
    tosses(n, grading)
    if n < 0 or n > cap:
        raise CapExceeded(f"{grading} stage {n} is beyond the cap {cap}", witness=n)
    return CoinStage(n, grading)


def projection_hom(n: int) -> LatticeHom:
    """Preimage map from plain stage ``n - 1`` subsets to plain stage ``n`` subsets."""
    lower, upper = coin_site(n - 1).site().lattice, coin_site(n).site().lattice
    earlier, later = CoinStage(n - 1, "plain"), CoinStage(n, "plain")
    return LatticeHom(lower, upper, tuple(earlier.preimage(s, later) for s in lower.elements)).check()


@dataclass(frozen=True)
class FatCantorStage:
    stage: CoinStage
    subset: int

    @property
    def n(self) -> int:
        return self.stage.n

    @property
    def measure(self) -> Fraction:
        return self.stage.measure(self.subset)


def fat_cantor(k: int) -> list[FatCantorStage]:
    """``A_1, ..., A_k``.

    ``A_1`` is the lexicographically least singleton; ``A_n`` is the preimage
    of ``A_{n-1}`` plus the lexicographically least point of each fiber over
    an outcome outside ``A_{n-1}``.
    """
    if k < 1 or k > FAT_CANTOR_STAGE_CAP:
        raise CapExceeded(f"fat_cantor supports 1 <= k <= {FAT_CANTOR_STAGE_CAP}, got {k}", witness=k)
    first = coin_site(1, "fatcantor")
    stages = [FatCantorStage(first, 1)]
    for n in range(2, k + 1):
        prev = stages[-1]
        cur = coin_site(n, "fatcantor")
        shift = cur.tosses - prev.stage.tosses
        subset = prev.stage.preimage(prev.subset, cur)
        outside = ((1 << prev.stage.ground) - 1) & ~prev.subset
        for y in bits(outside):
            subset |= 1 << (y << shift)
        stages.append(FatCantorStage(cur, subset))
    return stages


def recurrence_value(previous: Fraction, n: int) -> Fraction:
    """``mu(A_n)`` predicted from ``mu(A_{n-1})``."""
    return previous + (1 - previous) / 2 ** (2 * n - 1)


def verify_no_complement(stages: list[FatCantorStage], k: int) -> bool:
    """Every stage-``k`` outcome outside ``A_k`` has a fiber meeting ``A_{k+1}``."""
    return no_complement_fibers(stages, k)[0]


def no_complement_fibers(stages: list[FatCantorStage], k: int) -> tuple[bool, int]:
    """The verdict and the number of fibers checked."""
    if not 1 <= k < len(stages):
        raise PointfreeError(f"need 1 <= k < {len(stages)}, got {k}")
    if k > NO_COMPLEMENT_STAGE_CAP:
        raise CapExceeded(f"per-fiber check is capped at k = {NO_COMPLEMENT_STAGE_CAP}", witness=k)
    low, high = stages[k - 1], stages[k]
    shift = high.stage.tosses - low.stage.tosses
    fiber = (1 << (1 << shift)) - 1
    checked = 0
    for y in bits(((1 << low.stage.ground) - 1) & ~low.subset):
        checked += 1
        if not (fiber << (y << shift)) & high.subset:
            return False, checked
    return True, checked
