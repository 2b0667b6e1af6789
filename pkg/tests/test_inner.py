from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import join_ideals, mu_ideals
from pointfree.errors import NotFaithfulInput, PointfreeError
from pointfree.frame import FiniteFrame
from pointfree.fuzz import case_rng, random_site
from pointfree.inner import (
    basis_reextension,
    exhaustion,
    finite_part_roundtrip,
    inner_frame,
    is_almost_boolean,
    is_almost_disconnected,
    quotient_invariance,
    theorem_equivalence_check,
)
from pointfree.order import chain_lattice, to_mask

seeds = st.integers(min_value=0, max_value=10_000)


def _brute_boolean(ideals):
    """Whether the inclusion order on ``ideals`` is complemented."""
    top = frozenset().union(*ideals)
    bottom = min(ideals, key=len)
    for a in ideals:
        if not any(a & b == bottom and _join(ideals, a, b) == top for b in ideals):
            return False
    return True


def _join(ideals, a, b):
    return min((c for c in ideals if a | b <= c), key=len)


def _brute_almost_boolean(v):
    lat = v.lattice
    els = list(lat.elements)
    return all(
        any(lat.leq(d, c) and v(lat.meet(d, c0)) == 0 and v(lat.join(d, c0)) == v(c) for d in els)
        for c in els for c0 in els if lat.leq(c0, c)
    )


def test_sierpinski_reports(sierpinski, sierpinski_collapsed):
    r = inner_frame(sierpinski)
    assert r.frame.size == 3 and not r.boolean
    assert sorted(r.inner_measure) == [0, Fraction(1, 2), 1]
    verdict = is_almost_disconnected(sierpinski)
    assert not verdict.disconnected
    assert verdict.witness == ("1", "U")
    r2 = inner_frame(sierpinski_collapsed)
    assert r2.frame.size == 2 and r2.boolean
    assert is_almost_boolean(sierpinski_collapsed).boolean


def test_counting_measure_recovered(counting4):
    r = inner_frame(counting4)
    assert r.frame.size == 16 and r.boolean
    lat = counting4.lattice
    for u in r.frame.elements:
        top = lat.join_mask(r.frame.ideals[u])
        assert r.inner_measure[u] == bin(top).count("1")


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_equivalence_against_brute_force(seed):
    v = random_site(case_rng(seed, 0), max_size=7).valuation
    mu = dict(enumerate(v.values))
    ideals = mu_ideals(v.lattice, mu)
    brute_inner_boolean = _brute_boolean(ideals)
    report = theorem_equivalence_check(v)
    assert report.agree
    assert report.inner_boolean == brute_inner_boolean
    assert report.almost_boolean == _brute_almost_boolean(v)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_inner_ideals_are_bn_when_boolean(seed):
    # brute b(N): {J -> N} computed on the frame of plain ideals
    v = random_site(case_rng(seed, 0), max_size=7).valuation
    lat = v.lattice
    ideals = join_ideals(lat)
    null = frozenset(p for p in lat.elements if v(p) == 0)

    def imp(j, n):
        return max((w for w in ideals if all(lat.meet(a, b) in n for a in w for b in j)
                    and {x for x in w if x in j} <= n), key=len)

    bn = {imp(j, null) for j in ideals}
    inner = set(mu_ideals(lat, dict(enumerate(v.values))))
    assert (bn == inner) == theorem_equivalence_check(v).equals_bn


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_quotient_and_basis(seed):
    v = random_site(case_rng(seed, 0)).valuation
    assert quotient_invariance(v)
    assert basis_reextension(inner_frame(v))


def test_exhaustion(sierpinski, sierpinski_collapsed):
    lat = sierpinski.lattice
    u = lat.index("U")
    assert exhaustion(sierpinski, [lat.bottom, u]) == [u]
    with pytest.raises(PointfreeError):
        exhaustion(sierpinski_collapsed, [lat.bottom, u])


def test_finite_part_roundtrip():
    frame = FiniteFrame.from_lattice(chain_lattice(["0", "U", "1"]))
    rt = finite_part_roundtrip(frame, [0, "1/2", 1])
    assert rt.isomorphic
    with pytest.raises(NotFaithfulInput):
        finite_part_roundtrip(frame, [0, 1, 1])


def test_principal_and_null_element(sierpinski_collapsed):
    r = inner_frame(sierpinski_collapsed)
    lat = sierpinski_collapsed.lattice
    assert r.principal(lat.index("U")) == r.frame.top
    assert r.frame.ideal(r.null_element) == frozenset({lat.bottom})
    assert to_mask(r.null_ideal) == 1
