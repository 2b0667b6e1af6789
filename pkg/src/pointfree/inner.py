"""Inner locales of valuation sites.

The frame of a valuation ``(D, mu)`` is the frame of ideals of the
``mu-inner`` site on ``D``.  This module computes it together with the inner
measure ``mu_*(U) = max{mu(p) | p in U}``, decides almost-disconnectedness and
almost-Booleanness, and cross-checks the equivalence between those and
Booleanness of the inner frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded, NotFaithfulInput, PointfreeError
from .frame import FiniteFrame, boolean_sublocale_mask, is_boolean
from .order import bits, find_isomorphism, to_mask, to_set
from .site import Site, _closure_mask, principal_sheaf
from .valuation import Valuation, check_valuation, faithfulness_witness, quotient_by_congruence

INNER_FRAME_CAP = 20
EQUIVALENCE_CHECK_CAP = 12


def inner_measure_of(v: Valuation, ideal_mask: int) -> Fraction:
    return max((v(p) for p in bits(ideal_mask)), default=Fraction(0))


def null_ideal_mask(v: Valuation) -> int:
    return v.null_mask()


@dataclass(frozen=True)
class InnerLocaleReport:
    valuation: Valuation
    frame: FiniteFrame
    inner_measure: tuple[Fraction, ...]
    null_ideal: frozenset[int]
    boolean: bool
    faithful: bool

    def measure_of(self, u: int) -> Fraction:
        return self.inner_measure[u]

    def principal(self, p: int) -> int:
        """The frame element ``[p]``."""
        return self.frame.element_of_ideal(principal_sheaf(self.frame.origin, p))

    @property
    def null_element(self) -> int:
        return self.frame.element_of_ideal(to_mask(self.null_ideal))


def inner_faithfulness_witness(v: Valuation, frame: FiniteFrame) -> tuple[int, int] | None:
    """A pair ``U < V`` not separated by ``mu_*(- & [p])`` for any generator ``p``."""
    lat = v.lattice
    principals = [to_mask(principal_sheaf(frame.origin, p)) for p in lat.elements]
    masks = frame.ideals
    for u in frame.elements:
        for w in frame.elements:
            if u == w or not frame.leq(u, w):
                continue
            if not any(inner_measure_of(v, masks[u] & pm) < inner_measure_of(v, masks[w] & pm)
                       for pm in principals):
                return u, w
    return None


def inner_frame(v: Valuation, cap: int | None = None) -> InnerLocaleReport:
    """The inner frame of ``v`` with its inner measure.

    Raises CapExceeded beyond ``cap`` (default 20) lattice elements.
    """
    limit = INNER_FRAME_CAP if cap is None else cap
    site = Site.mu_inner(v)
    frame = FiniteFrame.from_site(site, limit)
    measure = tuple(inner_measure_of(v, m) for m in frame.ideals)
    witness = inner_faithfulness_witness(v, frame)
    if witness is not None:
        u, w = witness
        raise PointfreeError(f"inner measure does not separate {frame.label(u)} < {frame.label(w)}",
                             witness=(frame.label(u), frame.label(w)))
    return InnerLocaleReport(v, frame, measure, to_set(v.null_mask()), is_boolean(frame), True)


# almost disconnected / almost Boolean ------------------------------------
@dataclass(frozen=True)
class AlmostBooleanVerdict:
    disconnected: bool
    boolean: bool
    witness: tuple[str, str] | None = None
    checked_pairs: int = 0
    failed_search: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "disconnected": self.disconnected,
            "boolean": self.boolean,
            "witness": list(self.witness) if self.witness else None,
            "checked_pairs": self.checked_pairs,
        }


def relative_complement(v: Valuation, c: int, c0: int) -> int | None:
    """Some ``d <= c`` with ``mu(d & c0) = 0`` and ``mu(d | c0) = mu(c)``, or None."""
    lat = v.lattice
    for d in bits(lat.down(c)):
        if v(lat.meet(d, c0)) == 0 and v(lat.join(d, c0)) == v(c):
            return d
    return None


def _complement_failure(v: Valuation) -> tuple[tuple[int, int] | None, int]:
    """First pair ``c0 <= c`` with no relative complement, in a linear extension order."""
    lat = v.lattice
    order = lat.linear_extension()
    checked = 0
    for c in order:
        for c0 in order:
            if not lat.leq(c0, c):
                continue
            checked += 1
            if relative_complement(v, c, c0) is None:
                return (c, c0), checked
    return None, checked


def is_almost_disconnected(v: Valuation) -> AlmostBooleanVerdict:
    """For all ``c0 <= c`` there is ``d <= c`` with ``mu(d & c0) = 0`` and ``mu(d | c0) = mu(c)``.

    On a finite lattice an ascending chain below ``c`` is eventually constant,
    and ``mu(d & c_n) = 0`` for all ``n`` iff it holds at the top of the chain,
    so the almost-Boolean condition reduces to this same scan.
    """
    failure, checked = _complement_failure(v)
    lat = v.lattice
    if failure is None:
        return AlmostBooleanVerdict(True, True, None, checked)
    c, c0 = failure
    tried = tuple(lat.label(d) for d in bits(lat.down(c)))
    return AlmostBooleanVerdict(False, False, (lat.label(c), lat.label(c0)), checked, tried)


def _chain_failure(v: Valuation) -> tuple[tuple[int, ...] | None, int]:
    """Scan maximal chains' prefixes: a chain ``c_0 <= ... <= c_N <= c`` with no complement."""
    lat = v.lattice
    checked = 0
    for c in lat.linear_extension():
        for top in bits(lat.down(c)):
            checked += 1
            # every chain member lies below its maximum, so nullity at the top suffices
            if relative_complement(v, c, top) is None:
                return (c, top), checked
    return None, checked


def is_almost_boolean(v: Valuation) -> AlmostBooleanVerdict:
    """Chain form of the condition: each ascending chain below ``c`` is represented by its maximum."""
    failure, checked = _chain_failure(v)
    lat = v.lattice
    disconnected = failure is None or is_almost_disconnected(v).disconnected
    if failure is None:
        return AlmostBooleanVerdict(disconnected, True, None, checked)
    c, top = failure
    return AlmostBooleanVerdict(disconnected, False, (lat.label(c), lat.label(top)), checked)


# the three-way equivalence ---------------------------------------------
@dataclass(frozen=True)
class EquivalenceReport:
    almost_boolean: bool
    inner_boolean: bool
    equals_bn: bool
    transcript: tuple[str, ...] = ()

    @property
    def agree(self) -> bool:
        return self.almost_boolean == self.inner_boolean == self.equals_bn

    def as_dict(self) -> dict:
        return {"almost_boolean": self.almost_boolean, "inner_boolean": self.inner_boolean,
                "equals_bn": self.equals_bn, "agree": self.agree}


def inner_equals_bn(v: Valuation, inner: FiniteFrame | None = None) -> bool:
    """Whether the inner frame, as a set of ideals, is ``b(N)`` in the frame of ideals of ``D``."""
    if inner is None:
        inner = FiniteFrame.from_site(Site.mu_inner(v), INNER_FRAME_CAP)
    fin = FiniteFrame.from_site(Site.finite_join(v.lattice), INNER_FRAME_CAP)
    n = fin.element_of_ideal(v.null_mask())
    carrier = {fin.ideals[u] for u in bits(boolean_sublocale_mask(fin, n))}
    return carrier == set(inner.ideals)


def theorem_equivalence_check(v: Valuation, cap: int | None = None) -> EquivalenceReport:
    """Compute the three conditions independently and report them side by side."""
    limit = EQUIVALENCE_CHECK_CAP if cap is None else cap
    if v.lattice.size > limit:
        raise CapExceeded(f"theorem_equivalence_check: lattice has {v.lattice.size} elements, cap is {limit}",
                          witness=v.lattice.size)
    ab = is_almost_boolean(v)
    inner = FiniteFrame.from_site(Site.mu_inner(v), limit)
    ib = is_boolean(inner)
    eq = inner_equals_bn(v, inner)
    transcript = (
        f"lattice: {list(v.lattice.labels)}",
        f"mu: {[str(x) for x in v.values]}",
        f"almost boolean: {ab.boolean} witness {ab.witness}",
        f"inner frame: {list(inner.lattice.labels)} boolean {ib}",
        f"inner = b(N): {eq}",
    )
    return EquivalenceReport(ab.boolean, ib, eq, transcript)


# exhaustion and round trips -----------------------------------------------
def exhaustion(v: Valuation, u: Sequence[int] | frozenset[int] | int) -> list[int]:
    """An ascending chain in ``u`` whose principal sheaves join to ``u``.

    Start from a maximal-value member of ``u`` (earliest in a linear
    extension), then repeatedly join in the member that raises ``mu`` most,
    until ``mu`` reaches ``mu_*(u)``.  In the finite case the first step
    already reaches it; the loop keeps the construction honest when it does
    not.
    """
    lat = v.lattice
    mask = u if isinstance(u, int) else to_mask(u)
    site = Site.mu_inner(v)
    if _closure_mask(site, mask) != mask:
        raise PointfreeError("not an ideal of the inner frame")
    target = inner_measure_of(v, mask)
    rank = {p: i for i, p in enumerate(lat.linear_extension())}
    members = sorted(bits(mask), key=rank.__getitem__)
    best = max(members, key=lambda p: (v(p), -rank[p]))
    chain = [best]
    while v(chain[-1]) < target:  # pragma: no cover - unreachable on finite lattices
        nxt = max((lat.join(chain[-1], p) for p in members), key=v)
        chain.append(nxt)
    return chain


@dataclass(frozen=True)
class RoundTrip:
    valuation: Valuation
    isomorphic: bool
    unit: tuple[int, ...]


def finite_part_roundtrip(frame: FiniteFrame, measure: Sequence) -> RoundTrip:
    """Rebuild the inner frame from a finite frame with a faithful measure.

    Every element has finite measure, so the valuation site is the whole
    frame.  The comparison map ``u -> [u]`` must be an isomorphism.
    """
    v = check_valuation(frame.lattice, list(measure))
    bad = faithfulness_witness(v)
    if bad is not None:
        p, q = bad
        raise NotFaithfulInput(f"measure is not faithful: mu({frame.label(p)}) = mu({frame.label(q)})",
                               witness=(frame.label(p), frame.label(q)))
    report = inner_frame(v)
    inner = report.frame
    unit = tuple(inner.element_of_ideal(principal_sheaf(inner.origin, u)) for u in frame.elements)
    bijective = sorted(unit) == list(inner.elements)
    order_ok = bijective and all(
        frame.leq(a, b) == inner.leq(unit[a], unit[b]) for a in frame.elements for b in frame.elements
    )
    measure_ok = all(report.inner_measure[unit[a]] == v(a) for a in frame.elements)
    return RoundTrip(v, bool(order_ok and measure_ok), unit)


def quotient_invariance(v: Valuation) -> bool:
    """Whether projecting ideals along the null congruence is a measure-preserving frame isomorphism."""
    a = inner_frame(v)
    qv, proj = quotient_by_congruence(v)
    b = inner_frame(qv)
    images = []
    for ideal in a.frame.ideals:
        image = to_mask(proj(p) for p in bits(ideal))
        try:
            images.append(b.frame.element_of_ideal(image))
        except PointfreeError:
            return False
    if sorted(images) != list(b.frame.elements):
        return False
    fa, fb = a.frame, b.frame
    for x in fa.elements:
        if a.inner_measure[x] != b.inner_measure[images[x]]:
            return False
        for y in fa.elements:
            if fa.leq(x, y) != fb.leq(images[x], images[y]):
                return False
    return True


def frames_isomorphic(a: FiniteFrame, b: FiniteFrame) -> bool:
    return find_isomorphism(a.lattice, b.lattice) is not None


def basis_reextension(report: InnerLocaleReport) -> bool:
    """Restrict ``mu_*`` to the generators ``[p]`` and re-extend by maximization."""
    frame = report.frame
    principals = {report.principal(p): report.valuation(p) for p in report.valuation.lattice.elements}
    for u in frame.elements:
        below = [val for e, val in principals.items() if frame.leq(e, u)]
        if max(below, default=Fraction(0)) != report.inner_measure[u]:
            return False
    return True


__all__ = [
    "AlmostBooleanVerdict",
    "EquivalenceReport",
    "InnerLocaleReport",
    "RoundTrip",
    "basis_reextension",
    "exhaustion",
    "finite_part_roundtrip",
    "frames_isomorphic",
    "inner_equals_bn",
    "inner_frame",
    "inner_measure_of",
    "is_almost_boolean",
    "is_almost_disconnected",
    "quotient_invariance",
    "relative_complement",
    "theorem_equivalence_check",
]
