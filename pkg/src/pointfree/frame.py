"""Finite frames: Heyting structure, Booleanness, sublocales, frame maps.

A :class:`FiniteFrame` wraps a finite distributive lattice with a top.  In
the finite case every join is a finite join, so binary distributivity (checked
when the lattice is built) already is the infinite distributive law.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, NotCoveringPreserving, NotMeetPreserving, PointfreeError
from .order import FiniteLattice, bits, lattice_from_order, next_closure, popcount, to_mask, to_set
from .site import CoverageKind, Site, all_sheaf_masks, ideal_label

HEYTING_TABLE_LIMIT = 64
SUBLOCALE_ENUMERATION_CAP = 16


class FiniteFrame:
    """A finite frame, optionally remembering the ideals it was computed from.

    ``ideals[i]`` is the bitmask (over ``origin.lattice``) of the tau-ideal
    that frame element ``i`` stands for, when the frame came from a site.
    ``embedding[i]`` is the index in ``parent`` when the frame is a
    sublocale carrier of another frame.
    """

    def __init__(
        self,
        lattice: FiniteLattice,
        *,
        ideals: Sequence[int] | None = None,
        origin: Site | None = None,
        parent: "FiniteFrame | None" = None,
        embedding: Sequence[int] | None = None,
    ):
        lattice.require_top()
        self.lattice = lattice
        self.ideals = tuple(ideals) if ideals is not None else None
        self.origin = origin
        self.parent = parent
        self.embedding = tuple(embedding) if embedding is not None else None
        self._ideal_index = {m: i for i, m in enumerate(self.ideals)} if self.ideals else {}
        self._heyting: tuple[tuple[int, ...], ...] | None = None
        if lattice.size <= HEYTING_TABLE_LIMIT:
            self._heyting = tuple(
                tuple(self._heyting_sup(u, v) for v in lattice.elements) for u in lattice.elements
            )

    @classmethod
    def from_site(cls, site: Site, cap: int | None = None) -> "FiniteFrame":
        """The frame of tau-ideals of ``site``, ordered by inclusion."""
        masks = all_sheaf_masks(site, cap)
        lat = site.lattice
        labels = [ideal_label(lat, m) for m in masks]
        up = [to_mask(j for j, n in enumerate(masks) if m & ~n == 0) for m in masks]
        return cls(lattice_from_order(labels, up), ideals=masks, origin=site)

    @classmethod
    def from_lattice(cls, lattice: FiniteLattice) -> "FiniteFrame":
        return cls(lattice)

    # lattice pass-through ------------------------------------------------
    @property
    def size(self) -> int:
        return self.lattice.size

    def __len__(self) -> int:
        return self.size

    @property
    def elements(self) -> range:
        return self.lattice.elements

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def top(self) -> int:
        return self.lattice.top  # type: ignore[return-value]

    def label(self, u: int) -> str:
        return self.lattice.label(u)

    def index(self, label: object) -> int:
        return self.lattice.index(label)

    def leq(self, u: int, v: int) -> bool:
        return self.lattice.leq(u, v)

    def meet(self, u: int, v: int) -> int:
        return self.lattice.meet(u, v)

    def join(self, u: int, v: int) -> int:
        return self.lattice.join(u, v)

    def join_all(self, us: Iterable[int]) -> int:
        return self.lattice.join_mask(to_mask(us))

    def meet_all(self, us: Iterable[int]) -> int:
        return self.lattice.meet_mask(to_mask(us))

    def ideal(self, u: int) -> frozenset[int]:
        if self.ideals is None:
            raise PointfreeError("frame was not computed from a site")
        return to_set(self.ideals[u])

    def element_of_ideal(self, ideal: Iterable[int] | int) -> int:
        mask = ideal if isinstance(ideal, int) else to_mask(ideal)
        try:
            return self._ideal_index[mask]
        except KeyError:
            raise PointfreeError("set is not an element of this frame") from None

    # Heyting structure ---------------------------------------------------
    def _heyting_sup(self, u: int, v: int) -> int:
        lat = self.lattice
        return lat.join_mask(to_mask(w for w in lat.elements if lat.leq(lat.meet(w, u), v)))

    def heyting(self, u: int, v: int) -> int:
        if self._heyting is not None:
            return self._heyting[u][v]
        return self._heyting_sup(u, v)

    def negation(self, u: int) -> int:
        return self.heyting(u, self.bottom)

    def __repr__(self) -> str:
        return f"FiniteFrame(size={self.size})"


def heyting(frame: FiniteFrame, u: int, v: int) -> int:
    """Relative pseudocomplement: the join of all ``w`` with ``w & u <= v``."""
    return frame.heyting(u, v)


def negation(frame: FiniteFrame, u: int) -> int:
    """``u -> 0``, the largest element disjoint from ``u``."""
    return frame.negation(u)


def complement_of(frame: FiniteFrame, u: int) -> int | None:
    """The complement of ``u`` if it has one (``u | not u = 1``), else None."""
    n = frame.negation(u)
    return n if frame.join(u, n) == frame.top else None


def is_boolean(frame: FiniteFrame) -> bool:
    return all(complement_of(frame, u) is not None for u in frame.elements)


def atoms(frame: FiniteFrame) -> list[int]:
    """Minimal non-zero elements."""
    return [u for u in frame.elements if u != frame.bottom and frame.lattice.lower_covers(u) == [frame.bottom]]


def subframe(frame: FiniteFrame, members: Iterable[int]) -> FiniteFrame:
    """The carrier of a sublocale as a frame in the induced order."""
    members = sorted(set(members), key=lambda x: (popcount(frame.lattice.down(x)), x))
    k = len(members)
    up = [to_mask(j for j in range(k) if frame.leq(members[i], members[j])) for i in range(k)]
    lat = lattice_from_order([frame.label(m) for m in members], up)
    return FiniteFrame(lat, parent=frame, embedding=members)


# frame maps ---------------------------------------------------------------
@dataclass(frozen=True)
class FrameMap:
    """A (possibly partial) frame homomorphism ``source -> target``.

    Partial maps need not preserve the top; ``is_global`` says whether this one
    does.  For a locale map this is the inverse-image direction.
    """

    source: FiniteFrame
    target: FiniteFrame
    table: tuple[int, ...]

    def __call__(self, u: int) -> int:
        return self.table[u]

    @property
    def is_global(self) -> bool:
        return self.table[self.source.top] == self.target.top

    def right_adjoint(self, e: int) -> int:
        """``e -> join{u | f(u) <= e}``, the direct-image direction."""
        s, t = self.source, self.target
        return s.join_all(u for u in s.elements if t.leq(self.table[u], e))

    def compose(self, after: "FrameMap") -> "FrameMap":
        """``after . self``."""
        return FrameMap(self.source, after.target, tuple(after(self(u)) for u in self.source.elements))

    def violation(self) -> str | None:
        s, t, f = self.source, self.target, self.table
        if f[s.bottom] != t.bottom:
            return "bottom not preserved"
        for u in s.elements:
            for v in s.elements:
                if f[s.meet(u, v)] != t.meet(f[u], f[v]):
                    return f"meet of {s.label(u)}, {s.label(v)} not preserved"
                if f[s.join(u, v)] != t.join(f[u], f[v]):
                    return f"join of {s.label(u)}, {s.label(v)} not preserved"
        return None

    def check(self) -> "FrameMap":
        problem = self.violation()
        if problem:
            raise PointfreeError(f"not a frame homomorphism: {problem}")
        return self


def identity_map(frame: FiniteFrame) -> FrameMap:
    return FrameMap(frame, frame, tuple(frame.elements))


def is_dense_map(f: FrameMap) -> bool:
    """Dense iff the direct image of bottom is bottom: no nonzero ``u`` has ``f(u) = 0``."""
    return f.right_adjoint(f.target.bottom) == f.source.bottom


# nuclei and sublocales ----------------------------------------------------
def _quotient_onto(frame: FiniteFrame, members: Iterable[int], nucleus) -> tuple[FiniteFrame, FrameMap]:
    sub = subframe(frame, members)
    position = {m: i for i, m in enumerate(sub.embedding)}
    table = tuple(position[nucleus(u)] for u in frame.elements)
    return sub, FrameMap(frame, sub, table)


def nucleus_image_double_negation(frame: FiniteFrame) -> tuple[FiniteFrame, FrameMap]:
    """The smallest dense sublocale: carrier ``{not u}``, quotient ``u -> not not u``."""
    neg = frame.negation
    return _quotient_onto(frame, {neg(u) for u in frame.elements}, lambda u: neg(neg(u)))


def boolean_sublocale(frame: FiniteFrame, n: int) -> tuple[FiniteFrame, FrameMap]:
    """``b(n)``: carrier ``{u -> n}``, quotient ``u -> (u -> n) -> n``."""
    h = frame.heyting
    return _quotient_onto(frame, {h(u, n) for u in frame.elements}, lambda u: h(h(u, n), n))


def boolean_sublocale_mask(frame: FiniteFrame, n: int) -> int:
    return to_mask(frame.heyting(u, n) for u in frame.elements)


@dataclass(frozen=True)
class SublocaleSet:
    members: frozenset[int]
    is_open: bool
    is_closed: bool
    is_boolean: bool

    @property
    def kind(self) -> str:
        flags = [name for name, on in (("open", self.is_open), ("closed", self.is_closed),
                                       ("boolean", self.is_boolean)) if on]
        return "+".join(flags) if flags else "other"


def sublocale_closure_mask(frame: FiniteFrame, mask: int) -> int:
    """Smallest sublocale containing ``mask``: close under meets and ``a -> s``."""
    current = mask | 1 << frame.top
    while True:
        before = current
        members = list(bits(current))
        for s in members:
            for a in frame.elements:
                current |= 1 << frame.heyting(a, s)
            for t in members:
                current |= 1 << frame.meet(s, t)
        if current == before:
            return current


def is_sublocale_mask(frame: FiniteFrame, mask: int) -> bool:
    return sublocale_closure_mask(frame, mask) == mask


def _sublocale_is_boolean(frame: FiniteFrame, mask: int) -> bool:
    members = list(bits(mask))
    bottom = frame.meet_all(members)

    def nucleus(x: int) -> int:
        return frame.meet_all(s for s in members if frame.leq(x, s))

    for s in members:
        neg = frame.heyting(s, bottom)
        if nucleus(frame.join(s, neg)) != frame.top:
            return False
    return True


def classify_sublocale(frame: FiniteFrame, mask: int) -> SublocaleSet:
    open_images = {to_mask(frame.heyting(u, v) for v in frame.elements) for u in frame.elements}
    closed_images = {to_mask(v for v in frame.elements if frame.leq(u, v)) for u in frame.elements}
    return SublocaleSet(to_set(mask), mask in open_images, mask in closed_images,
                        _sublocale_is_boolean(frame, mask))


def enumerate_sublocales(frame: FiniteFrame, cap: int | None = None) -> list[SublocaleSet]:
    """All sublocales (subsets closed under meets and ``a -> s``), classified."""
    limit = SUBLOCALE_ENUMERATION_CAP if cap is None else cap
    if frame.size > limit:
        raise CapExceeded(f"enumerate_sublocales: frame has {frame.size} elements, cap is {limit}",
                          witness=frame.size)
    masks = sorted(set(next_closure(frame.size, lambda m: sublocale_closure_mask(frame, m))),
                   key=lambda m: (popcount(m), m))
    open_images = {to_mask(frame.heyting(u, v) for v in frame.elements) for u in frame.elements}
    closed_images = {to_mask(v for v in frame.elements if frame.leq(u, v)) for u in frame.elements}
    return [SublocaleSet(to_set(m), m in open_images, m in closed_images, _sublocale_is_boolean(frame, m))
            for m in masks]


# morphisms out of a site ---------------------------------------------------
def _covering_violation(site: Site, target: FiniteFrame, f: Sequence[int]) -> tuple[int, list[int]] | None:
    """A generating cover whose image is not a join in ``target``, or None."""
    lat = site.lattice
    if site.kind in (CoverageKind.FINITE_JOIN, CoverageKind.MU_INNER):
        for p in lat.elements:
            for q in lat.elements:
                if f[lat.join(p, q)] != target.join(f[p], f[q]):
                    return lat.join(p, q), [p, q]
    if site.kind is CoverageKind.MU_INNER:
        for p in lat.elements:
            for q in bits(lat.down(p)):
                if site.mu(q) == site.mu(p) and f[q] != f[p]:
                    return p, [q]
    if site.kind is CoverageKind.EXPLICIT:
        for t, family in site.covers:
            for q in bits(lat.down(t)):
                pulled = sorted({lat.meet(q, x) for x in family})
                if f[q] != target.join_all(f[x] for x in pulled):
                    return q, pulled
    return None


def extend_morphism(source_site: Site, target_frame: FiniteFrame,
                    generator_map: Mapping[object, object] | Sequence[int],
                    *, cap: int | None = None) -> FrameMap:
    """Extend a covering-preserving, meet-preserving map on generators to the sheaf frame.

    ``generator_map`` sends each site element (index, or label via a mapping)
    to a ``target_frame`` element.  The extension sends an ideal to the join of
    the images of its members; its right adjoint ``e -> {p | f(p) <= e}`` is
    checked against the generic adjoint.
    """
    lat = source_site.lattice
    if isinstance(generator_map, Mapping):
        f = [0] * lat.size
        for k, v in generator_map.items():
            f[lat.index(k)] = target_frame.index(v) if not isinstance(v, int) else v
    else:
        f = list(generator_map)
    if len(f) != lat.size:
        raise PointfreeError("generator map must be total")
    if f[lat.bottom] != target_frame.bottom:
        raise NotMeetPreserving("bottom is not sent to bottom", witness=(lat.label(lat.bottom),))
    for p in lat.elements:
        for q in lat.elements:
            if lat.leq(p, q) and not target_frame.leq(f[p], f[q]):
                raise NotMeetPreserving(f"not monotone at {lat.label(p)} <= {lat.label(q)}",
                                        witness=(lat.label(p), lat.label(q)))
            if f[lat.meet(p, q)] != target_frame.meet(f[p], f[q]):
                raise NotMeetPreserving(f"meet of {lat.label(p)}, {lat.label(q)} not preserved",
                                        witness=(lat.label(p), lat.label(q)))
    bad = _covering_violation(source_site, target_frame, f)
    if bad is not None:
        p, family = bad
        names = (lat.label(p), [lat.label(x) for x in family])
        raise NotCoveringPreserving(f"cover {names[1]} of {names[0]} is not sent to a join", witness=names)

    source = FiniteFrame.from_site(source_site, cap)
    table = tuple(target_frame.join_all(f[p] for p in bits(m)) for m in source.ideals)
    fmap = FrameMap(source, target_frame, table)
    problem = fmap.violation()
    if problem:  # pragma: no cover - guaranteed by the checks above
        raise PointfreeError(f"extension is not a frame homomorphism: {problem}")
    for e in target_frame.elements:
        ideal = to_mask(p for p in lat.elements if target_frame.leq(f[p], e))
        if source.element_of_ideal(ideal) != fmap.right_adjoint(e):  # pragma: no cover
            raise PointfreeError("right adjoint mismatch")
    return fmap


def site_right_adjoint(fmap: FrameMap, generator_map: Sequence[int], e: int) -> frozenset[int]:
    """``{p | f(p) <= e}`` as a tau-ideal of the source site."""
    t = fmap.target
    return frozenset(p for p, fp in enumerate(generator_map) if t.leq(fp, e))
