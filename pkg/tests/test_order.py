from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import glb, lub, order_pairs
from pointfree.errors import CycleError, MissingBoundError, NotDistributiveError, NotLatticeHom
from pointfree.fuzz import case_rng, random_site
from pointfree.order import (
    LatticeHom,
    build_lattice,
    chain_lattice,
    find_isomorphism,
    join_all,
    lattice_of_downsets,
    meet_all,
    next_closure,
    powerset_lattice,
)

seeds = st.integers(min_value=0, max_value=10_000)


def test_chain_operations():
    lat = chain_lattice(["0", "U", "1"])
    u = lat.index("U")
    assert lat.meet(u, lat.top) == u
    assert lat.join(u, lat.bottom) == u
    assert lat.leq(lat.bottom, u) and not lat.leq(lat.top, u)
    assert join_all(lat, []) == lat.bottom
    assert meet_all(lat, []) == lat.top


def test_powerset_labels_round_trip():
    lat = powerset_lattice("abc")
    assert lat.size == 8
    for i in lat.elements:
        assert lat.index(lat.label(i)) == i
    assert lat.label(lat.top) == "{a,b,c}"


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_meets_and_joins_match_brute_bounds(seed):
    lat = random_site(case_rng(seed, 0)).valuation.lattice
    leq = order_pairs(lat)
    els = list(lat.elements)
    for a in els:
        for b in els:
            assert lat.meet(a, b) == glb(els, leq, [a, b])
            assert lat.join(a, b) == lub(els, leq, [a, b])


def test_cycle_rejected_with_witness():
    with pytest.raises(CycleError) as exc:
        build_lattice(["0", "a", "b"], [("0", "a"), ("a", "b"), ("b", "a")])
    assert set(exc.value.witness) >= {"a", "b"}


def test_missing_bound_rejected():
    with pytest.raises(MissingBoundError):
        build_lattice(["a", "b"], [])


def _n5():
    return build_lattice(["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def _m3():
    return build_lattice(["0", "a", "b", "c", "1"], [("0", x) for x in "abc"] + [(x, "1") for x in "abc"])


@pytest.mark.parametrize("make", [_n5, _m3])
def test_non_distributive_lattices_rejected(make):
    with pytest.raises(NotDistributiveError) as exc:
        make()
    assert len(exc.value.witness) == 3


def test_downset_lattice_of_antichain_is_powerset():
    lat = lattice_of_downsets(["a", "b"], [0b01, 0b10])
    assert lat.size == 4
    assert find_isomorphism(lat, powerset_lattice("ab")) is not None
    assert find_isomorphism(lat, chain_lattice("0ab1")) is None


def test_next_closure_lists_every_closed_set_once():
    # closure: add bit 1 whenever bit 0 is present, on 3 bits
    def close(m):
        return m | 0b10 if m & 1 else m

    found = list(next_closure(3, close))
    expected = [m for m in range(8) if close(m) == m]
    assert sorted(found) == expected
    assert len(found) == len(set(found))


def test_lattice_hom_check():
    two = chain_lattice(["0", "1"])
    three = chain_lattice(["0", "U", "1"])
    LatticeHom.from_mapping(two, three, {"0": "0", "1": "1"}).check()
    with pytest.raises(NotLatticeHom):
        LatticeHom.from_mapping(two, three, {"0": "U", "1": "1"}).check()
    with pytest.raises(NotLatticeHom):
        LatticeHom.from_mapping(two, three, {"0": "0"})
