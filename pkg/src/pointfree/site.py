"""Grothendieck pretopologies on finite lattices.

A :class:`Site` pairs a lattice with one of three coverages:

* ``finite-join``: a finite family covers ``p`` when its join is ``p``;
* ``mu-inner``: finite joins, plus single elements ``q <= p`` with
  ``mu(q) = mu(p)`` (on a finite lattice every "for all eps > 0" approximation
  condition collapses to exact equality, since the gaps form a finite set);
* ``explicit``: generating covers ``(target, family)``, saturated lazily under
  pullback and composition.  The empty family always covers the bottom.

Sheaves with values in truth values are identified with tau-ideals, i.e.
downsets closed under covers, and sheafification is the least fixpoint of
"add ``p`` whenever a cover of ``p`` lies in the set".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapExceeded, LatticeError, NotDownwardClosed, PointfreeError
from .order import FiniteLattice, bits, next_closure, popcount, to_mask, to_set
from .valuation import Valuation

SHEAF_ENUMERATION_CAP = 20

IdealSet = frozenset  # frozenset[int]: a tau-ideal
PointFilter = frozenset  # frozenset[int]: a completely prime filter


class CoverageKind(enum.Enum):
    FINITE_JOIN = "finite-join"
    MU_INNER = "mu-inner"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class Site:
    lattice: FiniteLattice
    kind: CoverageKind
    covers: tuple[tuple[int, frozenset[int]], ...] = ()
    valuation: Valuation | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind is CoverageKind.MU_INNER:
            if self.valuation is None:
                raise PointfreeError("a mu-inner site needs a valuation")
            if self.valuation.lattice is not self.lattice:
                raise PointfreeError("valuation lives on a different lattice")
        lat = self.lattice
        for target, family in self.covers:
            for f in family:
                if not lat.leq(f, target):
                    raise LatticeError(
                        f"cover member {lat.label(f)} is not below target {lat.label(target)}",
                        witness=(lat.label(target), lat.label(f)),
                    )

    @classmethod
    def finite_join(cls, lattice: FiniteLattice) -> "Site":
        return cls(lattice, CoverageKind.FINITE_JOIN)

    @classmethod
    def mu_inner(cls, valuation: Valuation) -> "Site":
        return cls(valuation.lattice, CoverageKind.MU_INNER, valuation=valuation)

    @classmethod
    def explicit(cls, lattice: FiniteLattice, covers: Iterable[tuple[object, Iterable[object]]],
                 *, by_label: bool = False) -> "Site":
        spec = []
        for target, family in covers:
            if by_label:
                t = lattice.index(target)
                fam = frozenset(lattice.index(x) for x in family)
            else:
                t, fam = int(target), frozenset(int(x) for x in family)  # type: ignore[arg-type]
            spec.append((t, fam))
        return cls(lattice, CoverageKind.EXPLICIT, tuple(spec))

    @property
    def size(self) -> int:
        return self.lattice.size

    def mu(self, p: int):
        assert self.valuation is not None
        return self.valuation(p)


# closure ------------------------------------------------------------------
def _closure_mask(site: Site, mask: int) -> int:
    """Least tau-ideal containing the downset generated by ``mask``."""
    lat = site.lattice
    kind = site.kind
    current = lat.downclose_mask(mask) | 1 << lat.bottom
    while True:
        before = current
        if kind is not CoverageKind.EXPLICIT:
            # finite unions cover: in a finite lattice the ideal generated by a
            # downset is the principal downset of its join
            current = lat.down(lat.join_mask(current))
        if kind is CoverageKind.MU_INNER:
            mu = site.valuation
            for p in bits(lat.full_mask & ~current):
                mp = mu(p)
                if any(mu(q) == mp for q in bits(lat.down(p) & current)):
                    current |= lat.down(p)
        elif kind is CoverageKind.EXPLICIT:
            for target, family in site.covers:
                # pullbacks of the generating cover along every q <= target
                for q in bits(lat.down(target) & ~current):
                    if all(current >> lat.meet(q, f) & 1 for f in family):
                        current |= lat.down(q)
        if current == before:
            return current


def sheafify(site: Site, v: Iterable[int]) -> IdealSet:
    """Sheafification of the downward closed set ``v``.

    Raises NotDownwardClosed if ``v`` is not a downset.
    """
    mask = to_mask(v)
    if not site.lattice.is_downset_mask(mask):
        lat = site.lattice
        bad = next(e for e in bits(lat.downclose_mask(mask) & ~mask))
        raise NotDownwardClosed(f"{lat.label(bad)} is missing from the downset", witness=(lat.label(bad),))
    return to_set(_closure_mask(site, mask))


def principal_sheaf(site: Site, p: int) -> IdealSet:
    """The elementary proposition ``[p]``: sheafification of the principal downset of ``p``."""
    return to_set(_closure_mask(site, site.lattice.down(p)))


def is_cover(site: Site, target: int, family: Iterable[int]) -> bool:
    """Whether ``family`` (all members below ``target``) covers ``target``."""
    lat = site.lattice
    fam = to_mask(family)
    if fam & ~lat.down(target):
        bad = next(bits(fam & ~lat.down(target)))
        raise LatticeError(f"{lat.label(bad)} is not below {lat.label(target)}",
                           witness=(lat.label(target), lat.label(bad)))
    if site.kind is CoverageKind.FINITE_JOIN:
        return lat.join_mask(fam) == target
    if site.kind is CoverageKind.MU_INNER:
        # the whole finite family is the best finite sub-family, mu being monotone
        return site.mu(lat.join_mask(fam)) == site.mu(target)
    return bool(_closure_mask(site, lat.downclose_mask(fam)) >> target & 1)


def _check_cap(n: int, cap: int | None, what: str) -> None:
    limit = SHEAF_ENUMERATION_CAP if cap is None else cap
    if n > limit:
        raise CapExceeded(f"{what}: lattice has {n} elements, cap is {limit}", witness=n)


def _sort_by_inclusion(masks: Iterable[int]) -> list[int]:
    return sorted(set(masks), key=lambda m: (popcount(m), m))


def all_sheaf_masks(site: Site, cap: int | None = None) -> list[int]:
    lat = site.lattice
    _check_cap(lat.size, cap, "all_sheaves")
    if site.kind is CoverageKind.EXPLICIT:
        found = next_closure(lat.size, lambda m: _closure_mask(site, m))
    else:
        # every join-closed ideal of a finite lattice is principal
        found = (lat.down(p) for p in lat.elements if _closure_mask(site, lat.down(p)) == lat.down(p))
    return _sort_by_inclusion(found)


def all_sheaves(site: Site, cap: int | None = None) -> list[IdealSet]:
    """Every tau-ideal of ``site``, duplicate free, in a linear extension of inclusion.

    Frame structure on the result is provided by :meth:`FiniteFrame.from_site`.
    """
    return [to_set(m) for m in all_sheaf_masks(site, cap)]


def is_point_mask(site: Site, mask: int) -> bool:
    """Check the four completely-prime-filter conditions for an element set."""
    lat = site.lattice
    if not mask:
        return False
    for p in bits(mask):
        if lat.up(p) & ~mask:
            return False
        for q in bits(mask):
            if not mask >> lat.meet(p, q) & 1:
                return False
    # completely prime: covers are upward closed as families, so it is
    # enough that the part of the downset of p outside the filter fails to cover p
    return not any(is_cover(site, p, bits(lat.down(p) & ~mask)) for p in bits(mask))


def enumerate_points(site: Site, cap: int | None = None) -> list[PointFilter]:
    """All points of the site, as completely prime filters of lattice elements.

    Nonempty meet-closed upsets of a finite lattice are exactly the principal
    filters, so the scan runs over those.
    """
    lat = site.lattice
    _check_cap(lat.size, cap, "enumerate_points")
    found = [lat.up(a) for a in lat.elements if is_point_mask(site, lat.up(a))]
    return [to_set(m) for m in _sort_by_inclusion(found)]


def ideal_label(lattice: FiniteLattice, ideal: Iterable[int] | int) -> str:
    """Label an ideal by its maximal elements, e.g. ``[U]`` or ``[a,b]``."""
    mask = ideal if isinstance(ideal, int) else to_mask(ideal)
    maximal = [e for e in bits(mask) if lattice.up(e) & mask == 1 << e]
    return "[" + ",".join(lattice.label(e) for e in maximal) + "]"


def covers_by_label(site: Site) -> list[tuple[str, list[str]]]:
    lat = site.lattice
    return [(lat.label(t), [lat.label(f) for f in sorted(fam)]) for t, fam in site.covers]


def induced_basis_site(frame_lattice: FiniteLattice, basis: Sequence[int]) -> tuple[Site, list[int]]:
    """The site on a meet-closed basis ``P`` of a finite frame with the induced coverage.

    Families of basis elements cover ``b`` when their join in the frame is
    ``b``.  Generating covers are the inclusion-minimal such families.
    Returns the site on ``P`` (as its own lattice, with the induced order) and
    the list mapping site indices back to frame indices.
    """
    from .order import lattice_from_order

    basis = sorted(set(basis), key=lambda x: (popcount(frame_lattice.down(x)), x))
    k = len(basis)
    up = [to_mask(j for j in range(k) if frame_lattice.leq(basis[i], basis[j])) for i in range(k)]
    lat = lattice_from_order([frame_lattice.label(b) for b in basis], up)
    covers = []
    for t in range(k):
        below = [j for j in range(k) if j != t and lat.leq(j, t)]
        minimal: list[int] = []
        for sub in range(1 << len(below)):
            fam = to_mask(below[i] for i in bits(sub))
            if frame_lattice.join_mask(to_mask(basis[j] for j in bits(fam))) != basis[t]:
                continue
            if any(m & fam == m for m in minimal):
                continue
            minimal = [m for m in minimal if m & fam != fam] + [fam]
        covers.extend((t, to_set(m)) for m in minimal)
    return Site(lat, CoverageKind.EXPLICIT, tuple(covers)), basis
