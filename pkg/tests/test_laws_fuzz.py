from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from pointfree.frame import FiniteFrame, nucleus_image_double_negation
from pointfree.fuzz import KINDS, case_rng, fuzz_campaign, random_site, run_case
from pointfree.laws import (
    heyting_law_violations,
    implication_formula_violations,
    sheafify_violations,
    sublocale_structure_violations,
    subcanonicity_violations,
    valuation_difference_violations,
)
from pointfree.order import chain_lattice, powerset_lattice
from pointfree.site import Site

seeds = st.integers(min_value=0, max_value=10_000)


def test_laws_hold_on_small_frames(sierpinski, counting4):
    for f in (FiniteFrame.from_lattice(chain_lattice("0abc1")), FiniteFrame.from_lattice(powerset_lattice("abc")),
              FiniteFrame.from_site(Site.mu_inner(counting4))):
        assert heyting_law_violations(f) == {}
    assert sublocale_structure_violations(FiniteFrame.from_site(Site.mu_inner(sierpinski))) == []


def test_triple_negation_collapse():
    f = FiniteFrame.from_lattice(chain_lattice("0abc1"))
    for u in f.elements:
        n = f.negation
        assert n(n(n(u))) == n(u)
    sub, _ = nucleus_image_double_negation(f)
    assert sub.size == 2


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_site_laws_on_random_valuations(seed):
    v = random_site(case_rng(seed, 0)).valuation
    site = Site.mu_inner(v)
    assert valuation_difference_violations(v) == []
    assert implication_formula_violations(v) == []
    assert subcanonicity_violations(v) == []
    assert sheafify_violations(site) == []


def test_random_sites_are_replayable():
    a = random_site(case_rng(7, 3))
    b = random_site(case_rng(7, 3))
    assert a.describe() == b.describe()


def test_size_bound_respected():
    for i in range(100):
        assert random_site(case_rng(1, i), max_size=6).valuation.lattice.size <= 6


def test_campaigns_pass_and_parallel_agrees():
    for kind in KINDS:
        report = fuzz_campaign(kind, 30, seed=11)
        assert report.ok, report.failures[:1]
    serial = fuzz_campaign("equivalence", 40, seed=5)
    parallel = fuzz_campaign("equivalence", 40, seed=5, workers=2)
    assert [r.ok for r in serial.results] == [r.ok for r in parallel.results]
    assert [r.size for r in serial.results] == [r.size for r in parallel.results]


def test_run_case_and_replay_command():
    res = run_case("laws", 0, 4, 8)
    assert res.ok and res.index == 4
    report = fuzz_campaign("quotient", 1, seed=3, start=9)
    assert report.replay_command(9).endswith("--start 9 --max-size 8 --seed 3")
