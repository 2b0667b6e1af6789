"""Dyadic cubes and standard sets with exact Lebesgue content.

A standard set of thinness ``n`` in ``R^d`` is a finite union of cubes
``prod_i [a_i / 2^n, (a_i + 1) / 2^n]``.  Sets are stored row by row: a row
is keyed by the first ``d - 1`` corner coordinates and holds the last
coordinates as sorted, merged half-open index runs ``[start, stop)``.  This
keeps one-dimensional sets with millions of cubes cheap (the Smith-Volterra-
Cantor stages) while remaining exact.

Content is ``#cubes / 2^(n d)``; cubes only share boundary faces, so counting
cubes is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, DimMismatch, PointfreeError, ScopeError
from .order import BooleanLattice
from .valuation import Valuation

SHEAR_MAX_THINNESS = 12
SVC_MAX_STAGE = 20
SITE_MAX_CUBES = 16

Runs = tuple[int, ...]  # flat (start0, stop0, start1, stop1, ...)


def _merge_runs(pairs: Iterable[tuple[int, int]]) -> Runs:
    out: list[int] = []
    for s, e in sorted(p for p in pairs if p[0] < p[1]):
        if out and s <= out[-1]:
            if e > out[-1]:
                out[-1] = e
        else:
            out.extend((s, e))
    return tuple(out)


def _pairs(runs: Runs) -> Iterator[tuple[int, int]]:
    return zip(runs[0::2], runs[1::2])


def _intersect_runs(a: Runs, b: Runs) -> Runs:
    out: list[int] = []
    pa, pb = list(_pairs(a)), list(_pairs(b))
    i = j = 0
    while i < len(pa) and j < len(pb):
        s = max(pa[i][0], pb[j][0])
        e = min(pa[i][1], pb[j][1])
        if s < e:
            out.extend((s, e))
        if pa[i][1] < pb[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


@dataclass(frozen=True)
class DyadicCube:
    dim: int
    thinness: int
    corner: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dim < 1 or self.thinness < 0 or len(self.corner) != self.dim:
            raise PointfreeError(f"invalid cube {self!r}")

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 2 ** (self.thinness * self.dim))

    def bounds(self) -> list[tuple[Fraction, Fraction]]:
        h = Fraction(1, 2 ** self.thinness)
        return [(a * h, (a + 1) * h) for a in self.corner]


@dataclass(frozen=True)
class StandardSet:
    dim: int
    thinness: int
    rows: tuple[tuple[tuple[int, ...], Runs], ...]

    @classmethod
    def from_rows(cls, dim: int, thinness: int, rows: Iterable[tuple[Sequence[int], Iterable[tuple[int, int]]]]) -> "StandardSet":
        grouped: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for prefix, pairs in rows:
            grouped.setdefault(tuple(prefix), []).extend(pairs)
        return cls._build(dim, thinness, ((p, _merge_runs(v)) for p, v in grouped.items()))

    @classmethod
    def _build(cls, dim: int, thinness: int, rows: Iterable[tuple[tuple[int, ...], Runs]]) -> "StandardSet":
        if dim < 1 or thinness < 0:
            raise PointfreeError(f"invalid dimension {dim} or thinness {thinness}")
        kept = tuple(sorted((p, r) for p, r in rows if r))
        for p, _ in kept:
            if len(p) != dim - 1:
                raise DimMismatch(f"row key {p} does not fit dimension {dim}")
        return cls(dim, thinness, kept)

    @classmethod
    def from_cubes(cls, dim: int, thinness: int, cubes: Iterable[Sequence[int]]) -> "StandardSet":
        rows: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for c in cubes:
            c = tuple(int(x) for x in c)
            if len(c) != dim:
                raise DimMismatch(f"corner {c} has {len(c)} coordinates, expected {dim}")
            rows.setdefault(c[:-1], []).append((c[-1], c[-1] + 1))
        return cls._build(dim, thinness, ((p, _merge_runs(v)) for p, v in rows.items()))

    @classmethod
    def empty(cls, dim: int, thinness: int = 0) -> "StandardSet":
        return cls(dim, thinness, ())

    @classmethod
    def unit_cube(cls, dim: int, thinness: int = 0) -> "StandardSet":
        return refine(cls.from_cubes(dim, 0, [(0,) * dim]), thinness)

    def count(self) -> int:
        return sum(sum(r[1::2]) - sum(r[0::2]) for _, r in self.rows)

    def cubes(self) -> Iterator[tuple[int, ...]]:
        for prefix, runs in self.rows:
            for s, e in _pairs(runs):
                for x in range(s, e):
                    yield prefix + (x,)

    def cube_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.cubes())

    def __len__(self) -> int:
        return self.count()

    def is_empty(self) -> bool:
        return not self.rows


def measure_standard(s: StandardSet) -> Fraction:
    """``#cubes / 2^(n d)``."""
    return Fraction(s.count(), 2 ** (s.thinness * s.dim))


def refine(s: StandardSet, n: int) -> StandardSet:
    """Subdivide every cube into its ``2^(d (n - thinness))`` children."""
    m = n - s.thinness
    if m < 0:
        raise PointfreeError(f"cannot refine thinness {s.thinness} down to {n}")
    if m == 0:
        return s
    k = 1 << m
    rows = []
    for prefix, runs in s.rows:
        scaled = tuple(x << m for x in runs)
        for offsets in itertools.product(range(k), repeat=len(prefix)):
            rows.append((tuple((a << m) + o for a, o in zip(prefix, offsets)), scaled))
    return StandardSet._build(s.dim, n, rows)


def _common(s: StandardSet, t: StandardSet) -> tuple[StandardSet, StandardSet]:
    if s.dim != t.dim:
        raise DimMismatch(f"dimensions differ: {s.dim} vs {t.dim}", witness=(s.dim, t.dim))
    n = max(s.thinness, t.thinness)
    return refine(s, n), refine(t, n)


def union_s(s: StandardSet, t: StandardSet) -> StandardSet:
    a, b = _common(s, t)
    rows: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for prefix, runs in a.rows + b.rows:
        rows.setdefault(prefix, []).extend(_pairs(runs))
    return StandardSet._build(a.dim, a.thinness, ((p, _merge_runs(v)) for p, v in rows.items()))


def intersect_s(s: StandardSet, t: StandardSet) -> StandardSet:
    a, b = _common(s, t)
    other = dict(b.rows)
    rows = ((p, _intersect_runs(r, other[p])) for p, r in a.rows if p in other)
    return StandardSet._build(a.dim, a.thinness, rows)


def is_subset(s: StandardSet, t: StandardSet) -> bool:
    return intersect_s(s, t) == refine(s, max(s.thinness, t.thinness))


def _dyadic_exponent(x: Fraction) -> int:
    d = x.denominator
    if d & (d - 1):
        raise PointfreeError(f"{x} is not a dyadic rational")
    return d.bit_length() - 1


def translate_s(s: StandardSet, v: Sequence[Fraction | int | str]) -> StandardSet:
    """Shift by a dyadic vector, refining to its denominator first."""
    vec = [Fraction(x) for x in v]
    if len(vec) != s.dim:
        raise DimMismatch(f"vector has {len(vec)} coordinates, set has dimension {s.dim}")
    n = max([s.thinness] + [_dyadic_exponent(x) for x in vec])
    r = refine(s, n)
    shift = [int(x * 2 ** n) for x in vec]
    head, last = shift[:-1], shift[-1]
    rows = ((tuple(a + o for a, o in zip(p, head)), tuple(x + last for x in runs)) for p, runs in r.rows)
    return StandardSet._build(s.dim, n, rows)


def transpose2(s: StandardSet) -> StandardSet:
    """Swap the two axes of a planar set."""
    if s.dim != 2:
        raise ScopeError("transpose2 needs a planar set")
    events: dict[int, list[tuple[int, int]]] = {}
    for (b,), runs in s.rows:
        for st, en in _pairs(runs):
            events.setdefault(st, []).append((b, 1))
            events.setdefault(en, []).append((b, -1))
    active: set[int] = set()
    rows = []
    xs = sorted(events)
    for x, nxt in zip(xs, xs[1:] + [None]):
        for b, delta in events[x]:
            if delta > 0:
                active.add(b)
            else:
                active.discard(b)
        if nxt is None or not active:
            continue
        col = _merge_runs((b, b + 1) for b in active)
        rows.extend(((c,), col) for c in range(x, nxt))
    return StandardSet._build(2, s.thinness, rows)


@dataclass(frozen=True)
class ShearSpec:
    """``E_ij(a) = I + a e_ij``: coordinate ``i`` gains ``a`` times coordinate ``j``."""

    i: int
    j: int
    a: Fraction

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise PointfreeError("shear axes must differ")
        object.__setattr__(self, "a", Fraction(self.a))
        _dyadic_exponent(self.a)

    def apply(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        p = list(point)
        p[self.i] += self.a * p[self.j]
        return tuple(p)


def shear_bracket(s: StandardSet, spec: ShearSpec, n: int) -> tuple[StandardSet, StandardSet]:
    """Thinness-``n`` inner and outer standard sets around the sheared image of ``s``.

    ``outer`` holds every cube whose interior meets the image, ``inner`` every
    cube contained in it.  Each row of ``s`` maps to parallelograms; for those the
    tests are exact interval comparisons at the band's extreme heights, which
    agree with testing the cube corners against the closed polygon.
    """
    if s.dim != 2:
        raise ScopeError(f"shear_bracket is implemented for d = 2, got d = {s.dim}")
    if {spec.i, spec.j} != {0, 1}:
        raise ScopeError("shear axes must be 0 and 1 in the plane")
    if n > SHEAR_MAX_THINNESS:
        raise ScopeError(f"shear_bracket supports thinness up to {SHEAR_MAX_THINNESS}, got {n}")
    if s.thinness > n:
        raise ScopeError(f"set has thinness {s.thinness} > target thinness {n}")
    if spec.i == 0:
        inner, outer = shear_bracket(transpose2(s), ShearSpec(1, 0, spec.a), n)
        return transpose2(inner), transpose2(outer)
    r = refine(s, n)
    a = spec.a
    inner_rows, outer_rows = [], []
    for (b,), runs in r.rows:
        lo, hi = sorted((a * b, a * (b + 1)))
        outs, ins = [], []
        for st, en in _pairs(runs):
            outs.append((floor(st + lo), ceil(en + hi)))
            ins.append((ceil(st + hi), floor(en + lo)))
        outer_rows.append(((b,), outs))
        inner_rows.append(((b,), ins))
    return StandardSet.from_rows(2, n, inner_rows), StandardSet.from_rows(2, n, outer_rows)


@dataclass(frozen=True)
class SvcStage:
    k: int
    set: StandardSet

    @property
    def measure(self) -> Fraction:
        return measure_standard(self.set)

    @property
    def expected(self) -> Fraction:
        return Fraction(1, 2) + Fraction(1, 2 ** (self.k + 1))


def svc_stage(k: int) -> SvcStage:
    """Stage ``k`` of the Smith-Volterra-Cantor construction on ``[0, 1]``.

    Step ``m`` removes the open middle interval of length ``4^-m`` from each of
    the ``2^(m-1)`` pieces.  All endpoints lie on the grid of mesh
    ``2^-(2k+1)``, which is the thinness used.
    """
    if not 0 <= k <= SVC_MAX_STAGE:
        raise CapExceeded(f"svc_stage supports 0 <= k <= {SVC_MAX_STAGE}, got {k}", witness=k)
    n = 2 * k + 1
    full = 1 << n
    starts = [0]
    length = full
    for m in range(1, k + 1):
        gap = full >> (2 * m)  # 4^-m in grid units
        length = (length - gap) // 2
        shift = length + gap
        doubled = [0] * (2 * len(starts))
        doubled[0::2] = starts
        doubled[1::2] = [s0 + shift for s0 in starts]
        starts = doubled
    runs = [0] * (2 * len(starts))
    runs[0::2] = starts
    runs[1::2] = [s0 + length for s0 in starts]
    stage = SvcStage(k, StandardSet(1, n, (((), tuple(runs)),)))
    if stage.measure != stage.expected:  # pragma: no cover - closed form is a theorem
        raise PointfreeError(f"stage {k} has measure {stage.measure}, expected {stage.expected}")
    return stage


def standard_set_site(region: StandardSet, n: int) -> Valuation:
    """All sub-standard-sets of ``region`` at thinness ``n``, valued by content.

    The lattice is the powerset of the region's thinness-``n`` cubes.
    """
    if region.thinness > n:
        raise PointfreeError(f"region has thinness {region.thinness} > {n}")
    r = refine(region, n)
    if r.count() > SITE_MAX_CUBES:
        raise CapExceeded(f"region has {r.count()} cubes at thinness {n}, cap is {SITE_MAX_CUBES}",
                          witness=r.count())
    cubes = list(r.cubes())
    lattice = BooleanLattice([",".join(map(str, c)) for c in cubes])
    w = Fraction(1, 2 ** (n * region.dim))
    return Valuation.additive(lattice, [w] * len(cubes))
