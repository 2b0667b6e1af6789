"""Brute-force reference computations.

These work straight from the definitions over explicit Python sets and
relations and share no code with the library beyond reading a lattice's
order relation.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product


def order_pairs(lat):
    return {(a, b) for a in lat.elements for b in lat.elements if lat.leq(a, b)}


def glb(elements, leq, xs):
    lower = [z for z in elements if all((z, x) in leq for x in xs)]
    best = [z for z in lower if all((w, z) in leq for w in lower)]
    return best[0] if best else None


def lub(elements, leq, xs):
    upper = [z for z in elements if all((x, z) in leq for x in xs)]
    best = [z for z in upper if all((z, w) in leq for w in upper)]
    return best[0] if best else None


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, r))


def is_downset(lat, s):
    leq = order_pairs(lat)
    return all(p in s for q in s for p in lat.elements if (p, q) in leq)


def mu_ideals(lat, mu):
    """All subsets that are downward closed, contain 0, are join closed and absorb mu-approximations."""
    leq = order_pairs(lat)
    els = list(lat.elements)
    out = []
    for s in subsets(els):
        if lat.bottom not in s:
            continue
        if any(p not in s for q in s for p in els if (p, q) in leq):
            continue
        if any(lub(els, leq, [a, b]) not in s for a in s for b in s):
            continue
        if any(p not in s for q in s for p in els if (q, p) in leq and mu[q] == mu[p]):
            continue
        out.append(s)
    return out


def join_ideals(lat):
    """Ideals of the finite-join coverage: downsets containing 0 closed under binary joins."""
    return mu_ideals(lat, {p: Fraction(p + 1) for p in lat.elements})


def explicit_ideals(lat, covers):
    """Downsets containing 0 that contain ``q <= t`` whenever all ``q & f`` (f in a cover of t) lie inside."""
    leq = order_pairs(lat)
    els = list(lat.elements)
    out = []
    for s in subsets(els):
        if lat.bottom not in s or any(p not in s for q in s for p in els if (p, q) in leq):
            continue
        ok = True
        for t, fam in covers:
            for q in els:
                if (q, t) in leq and q not in s and all(glb(els, leq, [q, f]) in s for f in fam):
                    ok = False
        if ok:
            out.append(s)
    return out


def heyting_table(elements, leq, meet):
    """``u -> v`` as the greatest ``w`` with ``w & u <= v``, found by search."""
    table = {}
    for u, v in product(elements, repeat=2):
        cands = [w for w in elements if (meet(w, u), v) in leq]
        table[u, v] = next(w for w in cands if all((x, w) in leq for x in cands))
    return table


def sublocales(elements, leq, meet, top, heyting):
    """All subsets containing top, closed under binary meets and ``a -> s``."""
    out = []
    rest = [e for e in elements if e != top]
    for s in subsets(rest):
        s = s | {top}
        if any(meet(a, b) not in s for a in s for b in s):
            continue
        if any(heyting[a, x] not in s for a in elements for x in s):
            continue
        out.append(s)
    return out


def completely_prime_filters(lat, covers_fn):
    """Nonempty, upward closed, meet closed subsets meeting every cover of their members."""
    leq = order_pairs(lat)
    els = list(lat.elements)
    out = []
    for s in subsets(els):
        if not s:
            continue
        if any(p not in s for q in s for p in els if (q, p) in leq):
            continue
        if any(glb(els, leq, [a, b]) not in s for a in s for b in s):
            continue
        bad = False
        for p in s:
            below = [q for q in els if (q, p) in leq]
            for fam in subsets(below):
                if covers_fn(p, fam) and not (fam & s):
                    bad = True
                    break
            if bad:
                break
        if not bad:
            out.append(s)
    return out


def is_modular(lat, mu):
    return all(mu[a] + mu[b] == mu[lat.join(a, b)] + mu[lat.meet(a, b)] for a in lat.elements for b in lat.elements)
