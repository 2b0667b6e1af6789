"""Exhaustive law checks shared by the test suite, the fuzz campaigns and the CLI.

Each checker returns a list of human-readable violations; an empty list means
the law holds on every tuple scanned.
"""

from __future__ import annotations

from itertools import product

from .frame import (
    FiniteFrame,
    boolean_sublocale_mask,
    enumerate_sublocales,
    is_boolean,
)
from .inner import inner_faithfulness_witness
from .order import bits, to_mask
from .site import Site, _closure_mask, all_sheaf_masks, principal_sheaf, sheafify
from .valuation import Valuation, is_faithful

HEYTING_ITEMS = 8


def heyting_law_violations(frame: FiniteFrame) -> dict[int, list[str]]:
    """Items (1)-(8) of the standard list of Heyting identities, plus the adjunction (item 0).

    Item 8 (``- -> v`` turns joins into meets) is checked on the empty join and
    on binary joins, which generate all finite ones.
    """
    f = frame
    h, m, j, leq = f.heyting, f.meet, f.join, f.leq
    one, zero = f.top, f.bottom
    lab = f.label
    bad: dict[int, list[str]] = {k: [] for k in range(HEYTING_ITEMS + 1)}
    for u, v in product(f.elements, repeat=2):
        uv = h(u, v)
        if not leq(m(uv, u), v):
            bad[1].append(f"({lab(u)} -> {lab(v)}) & {lab(u)} is not below {lab(v)}")
        if (uv == one) != leq(u, v):
            bad[3].append(f"{lab(u)} -> {lab(v)} = 1 disagrees with {lab(u)} <= {lab(v)}")
        if not leq(v, uv):
            bad[5].append(f"{lab(v)} is not below {lab(u)} -> {lab(v)}")
        if not leq(u, h(uv, v)):
            bad[6].append(f"{lab(u)} is not below ({lab(u)} -> {lab(v)}) -> {lab(v)}")
        if h(h(uv, v), v) != uv:
            bad[7].append(f"triple implication fails for {lab(u)}, {lab(v)}")
    for u in f.elements:
        if h(one, u) != u:
            bad[2].append(f"1 -> {lab(u)} != {lab(u)}")
        if h(zero, u) != one:
            bad[8].append(f"0 -> {lab(u)} != 1")
    for u, v, w in product(f.elements, repeat=3):
        if h(u, h(v, w)) != h(m(u, v), w):
            bad[4].append(f"currying fails for {lab(u)}, {lab(v)}, {lab(w)}")
        if h(j(u, v), w) != m(h(u, w), h(v, w)):
            bad[8].append(f"({lab(u)} | {lab(v)}) -> {lab(w)} is not the meet")
        if leq(m(w, u), v) != leq(w, h(u, v)):
            bad[0].append(f"adjunction fails for w={lab(w)}, u={lab(u)}, v={lab(v)}")
    return {k: v for k, v in bad.items() if v}


def frame_distributivity_violations(frame: FiniteFrame) -> list[str]:
    """``a & join(S) = join(a & s)`` for every element and every subset (size <= 12)."""
    f = frame
    out = []
    if f.size > 12:
        subsets = [to_mask(p) for p in product(f.elements, repeat=2)]
    else:
        subsets = range(1 << f.size)
    for a in f.elements:
        for s in subsets:
            left = f.meet(a, f.lattice.join_mask(s))
            right = f.join_all(f.meet(a, x) for x in bits(s))
            if left != right:
                out.append(f"{f.label(a)} does not distribute over {[f.label(x) for x in bits(s)]}")
    return out


def boolean_implication_violations(frame: FiniteFrame) -> list[str]:
    """In a Boolean frame ``u -> v = not u | v``."""
    if not is_boolean(frame):
        return []
    return [f"{frame.label(u)} -> {frame.label(v)}" for u, v in product(frame.elements, repeat=2)
            if frame.heyting(u, v) != frame.join(frame.negation(u), v)]


def sublocale_structure_violations(frame: FiniteFrame) -> list[str]:
    """Boolean sublocales are ``b(meet S)``; in a Boolean frame every sublocale is an up-set."""
    out = []
    subs = enumerate_sublocales(frame)
    for s in subs:
        mask = to_mask(s.members)
        if s.is_boolean:
            n = frame.meet_all(s.members)
            if boolean_sublocale_mask(frame, n) != mask:
                out.append(f"Boolean sublocale {sorted(s.members)} is not b({frame.label(n)})")
    if is_boolean(frame):
        upsets = {frame.lattice.up(u) for u in frame.elements}
        found = {to_mask(s.members) for s in subs}
        if found != upsets:
            out.append("Boolean frame has a sublocale that is not an up-set, or misses one")
        if not all(s.is_closed for s in subs):
            out.append("Boolean frame has a sublocale not classified as closed")
    return out


def sheafify_violations(site: Site) -> list[str]:
    """Closure-operator laws and preservation of binary intersections on all downsets."""
    lat = site.lattice
    downsets = [m for m in range(1 << lat.size) if lat.is_downset_mask(m)] if lat.size <= 10 else []
    close = {d: _closure_mask(site, d) for d in downsets}
    out = []
    for d in downsets:
        c = close[d]
        if d & ~c:
            out.append(f"not inflationary at {sorted(bits(d))}")
        if _closure_mask(site, c) != c:
            out.append(f"not idempotent at {sorted(bits(d))}")
    for d, e in product(downsets, repeat=2):
        if d & ~e == 0 and close[d] & ~close[e]:
            out.append("not monotone")
        if close[d & e] != close[d] & close[e]:
            out.append(f"does not preserve the intersection of {sorted(bits(d))} and {sorted(bits(e))}")
            break
    return out


def implication_formula_violations(v: Valuation, frame: FiniteFrame | None = None) -> list[str]:
    """``[p] = {q | mu(q & p) = mu(q)}`` and ``[p] -> N = {q | mu(q & p) = 0}``; also ``J -> N``."""
    lat = v.lattice
    site = Site.mu_inner(v)
    if frame is None:
        frame = FiniteFrame.from_site(site)
    null = frame.element_of_ideal(v.null_mask())
    out = []
    for p in lat.elements:
        formula = frozenset(q for q in lat.elements if v(lat.meet(q, p)) == v(q))
        if principal_sheaf(site, p) != formula:
            out.append(f"[{lat.label(p)}] differs from the formula")
        if sheafify(site, bits(lat.down(p))) != formula:
            out.append(f"sheafified principal downset of {lat.label(p)} differs")
        neg = frame.heyting(frame.element_of_ideal(formula), null)
        expected = frozenset(q for q in lat.elements if v(lat.meet(q, p)) == 0)
        if frame.ideal(neg) != expected:
            out.append(f"[{lat.label(p)}] -> N differs from the formula")
    for u in frame.elements:
        ideal = frame.ideal(u)
        expected = frozenset(q for q in lat.elements if all(v(lat.meet(q, p)) == 0 for p in ideal))
        if frame.ideal(frame.heyting(u, null)) != expected:
            out.append(f"{frame.label(u)} -> N differs from the formula")
    return out


def subcanonicity_violations(v: Valuation, frame: FiniteFrame | None = None) -> list[str]:
    """Principal downsets are all sheaves iff ``mu`` is faithful; ``mu_*`` is faithful."""
    lat = v.lattice
    site = Site.mu_inner(v)
    if frame is None:
        frame = FiniteFrame.from_site(site)
    subcanonical = all(to_mask(principal_sheaf(site, p)) == lat.down(p) for p in lat.elements)
    out = []
    if subcanonical != is_faithful(v):
        out.append(f"subcanonical={subcanonical} but faithful={is_faithful(v)}")
    witness = inner_faithfulness_witness(v, frame)
    if witness is not None:
        out.append(f"inner measure does not separate {frame.label(witness[0])} < {frame.label(witness[1])}")
    return out


def valuation_difference_violations(v: Valuation) -> list[str]:
    """The two difference inequalities for valuations, exhaustively."""
    lat = v.lattice
    els = list(lat.elements)
    pairs = [(p, q) for p in els for q in els if lat.leq(q, p)]
    out = []
    for (p, q), r in product(pairs, els):
        if v(lat.meet(p, r)) - v(lat.meet(q, r)) > v(p) - v(q):
            out.append(f"meet difference fails for {lat.label(p)}, {lat.label(q)}, {lat.label(r)}")
    for (p1, q1), (p2, q2) in product(pairs, repeat=2):
        if v(lat.join(p1, p2)) - v(lat.join(q1, q2)) > v(p1) - v(q1) + v(p2) - v(q2):
            out.append("join difference fails")
    return out


def frame_law_violations(site: Site) -> list[str]:
    """All ideals are closed under intersection; the computed frame distributes."""
    masks = set(all_sheaf_masks(site))
    out = [f"intersection of ideals {sorted(bits(a))}, {sorted(bits(b))} is not an ideal"
           for a, b in product(masks, repeat=2) if a & b not in masks]
    frame = FiniteFrame.from_site(site)
    return out + frame_distributivity_violations(frame)
