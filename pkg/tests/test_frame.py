from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import heyting_table, order_pairs, sublocales
from pointfree.errors import CapExceeded, NotCoveringPreserving, NotMeetPreserving
from pointfree.frame import (
    FiniteFrame,
    atoms,
    boolean_sublocale,
    complement_of,
    enumerate_sublocales,
    extend_morphism,
    identity_map,
    is_boolean,
    is_dense_map,
    nucleus_image_double_negation,
)
from pointfree.fuzz import case_rng, random_site
from pointfree.laws import boolean_implication_violations, frame_distributivity_violations
from pointfree.order import chain_lattice, powerset_lattice
from pointfree.site import Site

seeds = st.integers(min_value=0, max_value=10_000)


def _sierpinski_frame(v):
    return FiniteFrame.from_site(Site.mu_inner(v))


def test_sierpinski_frame_is_three_chain(sierpinski):
    f = _sierpinski_frame(sierpinski)
    assert f.size == 3
    assert not is_boolean(f)
    mid = next(u for u in f.elements if u not in (f.top, f.bottom))
    assert f.negation(mid) == f.bottom
    assert complement_of(f, mid) is None
    assert f.label(mid) == "[U]"


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_heyting_matches_search(seed):
    v = random_site(case_rng(seed, 0)).valuation
    for f in (FiniteFrame.from_site(Site.mu_inner(v)), FiniteFrame.from_site(Site.finite_join(v.lattice))):
        table = heyting_table(list(f.elements), order_pairs(f.lattice), f.meet)
        for (u, w), expected in table.items():
            assert f.heyting(u, w) == expected


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_sublocales_match_brute_force(seed):
    v = random_site(case_rng(seed, 0), max_size=6).valuation
    f = FiniteFrame.from_site(Site.finite_join(v.lattice))
    table = heyting_table(list(f.elements), order_pairs(f.lattice), f.meet)
    brute = sublocales(list(f.elements), order_pairs(f.lattice), f.meet, f.top, table)
    assert {s.members for s in enumerate_sublocales(f)} == set(brute)


def test_sierpinski_sublocale_kinds(sierpinski):
    f = _sierpinski_frame(sierpinski)
    subs = enumerate_sublocales(f)
    assert len(subs) == 4
    by_size = {len(s.members): s for s in subs}
    assert by_size[1].is_open and by_size[1].is_closed
    assert by_size[3].is_open and by_size[3].is_closed


def test_boolean_sublocale_of_sierpinski(sierpinski):
    f = _sierpinski_frame(sierpinski)
    u = f.index("[U]")
    sub, quotient = boolean_sublocale(f, u)
    assert set(sub.embedding) == {u, f.top}
    assert is_boolean(sub)
    quotient.check()
    dn, q = nucleus_image_double_negation(f)
    assert dn.size == 2
    assert is_dense_map(q)


def test_counting_frame(counting4):
    f = FiniteFrame.from_site(Site.mu_inner(counting4))
    assert f.size == 16
    assert is_boolean(f)
    assert len(atoms(f)) == 4
    assert not boolean_implication_violations(f)
    assert not frame_distributivity_violations(f)


def test_sublocale_cap():
    f = FiniteFrame.from_lattice(powerset_lattice("abcde"))
    with pytest.raises(CapExceeded):
        enumerate_sublocales(f)


def test_extend_morphism_identity(sierpinski):
    site = Site.finite_join(sierpinski.lattice)
    target = FiniteFrame.from_lattice(chain_lattice(["0", "U", "1"]))
    fmap = extend_morphism(site, target, {"0": "0", "U": "U", "1": "1"})
    assert fmap.is_global
    assert identity_map(target).check()


def test_extend_morphism_rejections(sierpinski, sierpinski_collapsed):
    lat = sierpinski.lattice
    target = FiniteFrame.from_lattice(chain_lattice(["0", "U", "1"]))
    with pytest.raises(NotMeetPreserving):
        extend_morphism(Site.finite_join(lat), target, {"0": "0", "U": "1", "1": "U"})
    # U covers 1 in the mu-inner site of (0, 1, 1), so U and 1 must share an image
    collapsed = Site.mu_inner(sierpinski_collapsed)
    with pytest.raises(NotCoveringPreserving):
        extend_morphism(collapsed, target, {"0": "0", "U": "U", "1": "1"})
