"""Exact-rational valuations on finite distributive lattices.

Values are :class:`fractions.Fraction` throughout; a valuation is a map
``mu`` with ``mu(0) = 0``, monotone, and modular:
``mu(p) + mu(q) = mu(p | q) + mu(p & q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, Union

from .errors import (
    NonzeroBottom,
    NotModular,
    NotMonotone,
    RestrictionMismatch,
    ValuationError,
)
from .order import BooleanLattice, FiniteLattice, LatticeHom, bits, lattice_from_order, to_mask

if TYPE_CHECKING:  # pragma: no cover
    from .frame import FrameMap

RatLike = Union[Fraction, int, str]


def to_rat(value: RatLike) -> Fraction:
    """Parse ``value`` as a nonnegative exact rational.

    Accepts Fractions, integers and ``"p/q"`` / ``"p"`` strings.  Floats are
    rejected on purpose.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"not an exact rational: {value!r}")
    if isinstance(value, Fraction):
        r = value
    elif isinstance(value, int):
        r = Fraction(value)
    elif isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"not an integer or p/q fraction: {value!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {value!r}")
        r = Fraction(n, d)
    else:
        raise ValueError(f"not an exact rational: {value!r}")
    if r < 0:
        raise ValueError(f"negative value {value!r}")
    return r


@dataclass(frozen=True)
class Valuation:
    """A validated valuation.  Construct via :func:`check_valuation`."""

    lattice: FiniteLattice
    values: tuple[Fraction, ...]

    def __call__(self, p: int) -> Fraction:
        return self.values[p]

    @property
    def total(self) -> Fraction:
        return max(self.values)

    def as_dict(self) -> dict[str, Fraction]:
        return {self.lattice.label(i): v for i, v in enumerate(self.values)}

    def null_mask(self) -> int:
        return to_mask(i for i, v in enumerate(self.values) if v == 0)

    @classmethod
    def additive(cls, lattice: BooleanLattice, weights: Sequence[RatLike]) -> "Valuation":
        """Sum-of-atom-weights valuation on a powerset; modular by construction."""
        w = [to_rat(x) for x in weights]
        if len(w) != lattice.k:
            raise ValuationError("one weight per atom required")
        values = []
        for mask in range(lattice.size):
            values.append(sum((w[j] for j in bits(mask)), Fraction(0)))
        return cls(lattice, tuple(values))


def _value_table(lattice: FiniteLattice, values: Mapping[object, RatLike] | Sequence[RatLike]) -> list[Fraction]:
    if isinstance(values, Mapping):
        table: list[Fraction | None] = [None] * lattice.size
        for key, v in values.items():
            table[lattice.index(key)] = to_rat(v)
        missing = [lattice.label(i) for i, v in enumerate(table) if v is None]
        if missing:
            raise ValuationError(f"valuation is not total, missing {missing}", witness=missing)
        return table  # type: ignore[return-value]
    table = [to_rat(v) for v in values]
    if len(table) != lattice.size:
        raise ValuationError(f"expected {lattice.size} values, got {len(table)}")
    return table


def valuation_violation(lattice: FiniteLattice, values: Sequence[Fraction],
                        members: Iterable[int] | None = None) -> ValuationError | None:
    """First violated valuation law (as an unraised error), or None.

    With ``members`` the scan is restricted to that sublattice (used for
    measures on principal downsets).
    """
    elems = list(lattice.elements if members is None else members)
    bottom = lattice.bottom
    if values[bottom] != 0:
        return NonzeroBottom(
            f"value at bottom {lattice.label(bottom)} is {values[bottom]}, not 0",
            witness=(lattice.label(bottom),),
        )
    for p in elems:
        for q in elems:
            if p != q and lattice.leq(p, q) and values[p] > values[q]:
                return NotMonotone(
                    f"{lattice.label(p)} <= {lattice.label(q)} but "
                    f"{values[p]} > {values[q]}",
                    witness=(lattice.label(p), lattice.label(q)),
                )
    for i, p in enumerate(elems):
        for q in elems[i + 1:]:
            j, m = lattice.join(p, q), lattice.meet(p, q)
            if values[p] + values[q] != values[j] + values[m]:
                return NotModular(
                    f"mu({lattice.label(p)}) + mu({lattice.label(q)}) = {values[p] + values[q]} "
                    f"but mu(join) + mu(meet) = {values[j] + values[m]}",
                    witness=(lattice.label(p), lattice.label(q)),
                )
    return None


def check_valuation(lattice: FiniteLattice, values: Mapping[object, RatLike] | Sequence[RatLike]) -> Valuation:
    """Validate ``values`` as a valuation on ``lattice``.

    Raises NonzeroBottom, NotMonotone or NotModular carrying the first
    violating element(s) as ``witness``.
    """
    table = _value_table(lattice, values)
    error = valuation_violation(lattice, table)
    if error is not None:
        raise error
    return Valuation(lattice, tuple(table))


def faithfulness_witness(v: Valuation) -> tuple[int, int] | None:
    """A pair ``p < q`` with ``mu(p) = mu(q)``, or None when ``v`` is faithful."""
    lat = v.lattice
    for q in lat.linear_extension():
        for p in lat.lower_covers(q):
            if v(p) == v(q):
                return p, q
    return None


def is_faithful(v: Valuation) -> bool:
    """True iff ``p <= q`` and ``mu(p) = mu(q)`` force ``p = q``.

    Checking lower covers suffices: a strict pair with equal values has a
    cover pair with equal values in between, by monotonicity.
    """
    return faithfulness_witness(v) is None


def congruent(v: Valuation, p: int, q: int) -> bool:
    m = v.lattice.meet(p, q)
    return v(p) == v(m) == v(q)


def quotient_by_congruence(v: Valuation) -> tuple[Valuation, LatticeHom]:
    """Quotient by ``p ~ q iff mu(p) = mu(p & q) = mu(q)``.

    Returns the induced (faithful) valuation on the quotient lattice and the
    projection homomorphism.  Each class is labelled by its largest member.
    """
    lat = v.lattice
    class_of = [-1] * lat.size
    reps: list[int] = []
    for p in lat.elements:
        if class_of[p] != -1:
            continue
        members = [q for q in lat.elements if congruent(v, p, q)]
        top = lat.join_mask(to_mask(members))
        for q in members:
            class_of[q] = len(reps)
        reps.append(top)
    k = len(reps)
    up = [to_mask(j for j in range(k) if lat.leq(reps[i], reps[j])) for i in range(k)]
    quotient = lattice_from_order([lat.label(r) for r in reps], up)
    qv = Valuation(quotient, tuple(v(r) for r in reps))
    return qv, LatticeHom(lat, quotient, tuple(class_of))


def pullback_valuation(hom: LatticeHom, v: Valuation) -> Valuation:
    """The composite ``mu . f`` on the source lattice of ``hom``."""
    if hom.target is not v.lattice and hom.target.labels != v.lattice.labels:
        raise ValuationError("homomorphism target is not the valuation's lattice")
    hom.check()
    return check_valuation(hom.source, [v(hom(p)) for p in hom.source.elements])


def glue_measures(
    frame: FiniteLattice,
    u: int,
    v: int,
    m_u: Mapping[int, RatLike],
    m_v: Mapping[int, RatLike],
) -> dict[int, Fraction]:
    """Glue measures on the principal downsets of ``u`` and ``v``.

    ``frame`` is any finite frame or distributive lattice; measures are keyed
    by element index.  They must agree exactly on the downset of ``u & v``;
    the result on the downset of ``u | v`` is
    ``Z -> m_u(Z & u) + m_v(Z & v) - m_u(Z & u & v)``.
    """
    lat = frame.lattice if hasattr(frame, "lattice") else frame
    mu_u = {p: to_rat(x) for p, x in m_u.items()}
    mu_v = {p: to_rat(x) for p, x in m_v.items()}
    for name, mu, bound in (("m_u", mu_u, u), ("m_v", mu_v, v)):
        expected = set(bits(lat.down(bound)))
        if set(mu) != expected:
            raise ValuationError(f"{name} must be defined exactly on the downset of {lat.label(bound)}")
        table = [Fraction(0)] * lat.size
        for p, x in mu.items():
            table[p] = x
        error = valuation_violation(lat, table, members=sorted(expected))
        if error is not None:
            raise error
    overlap = lat.meet(u, v)
    for p in bits(lat.down(overlap)):
        if mu_u[p] != mu_v[p]:
            raise RestrictionMismatch(
                f"measures disagree at {lat.label(p)}: {mu_u[p]} != {mu_v[p]}",
                witness=(lat.label(p),),
            )
    glued = {}
    for z in bits(lat.down(lat.join(u, v))):
        zu = lat.meet(z, u)
        glued[z] = mu_u[zu] + mu_v[lat.meet(z, v)] - mu_u[lat.meet(zu, v)]
    return glued


def pushforward_measure(f: "FrameMap", m: Mapping[int, RatLike] | Sequence[RatLike]) -> tuple[Fraction, ...]:
    """Push a measure forward along a locale map given by its frame homomorphism.

    ``f`` is the inverse-image frame homomorphism ``O(M) -> O(L)`` (a
    :class:`~pointfree.frame.FrameMap` from ``f.source`` to ``f.target``) and
    ``m`` a measure on ``O(L) = f.target``.  The result, indexed by elements
    of ``f.source``, is ``U -> m(f(U))``; it is verified to be a valuation.
    """
    target = f.target.lattice
    table = _value_table(target, {target.label(k): x for k, x in m.items()} if isinstance(m, Mapping) else m)
    pushed = [table[f(u)] for u in f.source.lattice.elements]
    return check_valuation(f.source.lattice, pushed).values
