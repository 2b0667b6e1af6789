from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointfree.dyadic import (
    ShearSpec,
    StandardSet,
    intersect_s,
    is_subset,
    measure_standard,
    refine,
    shear_bracket,
    standard_set_site,
    svc_stage,
    translate_s,
    transpose2,
    union_s,
)
from pointfree.errors import DimMismatch, ScopeError
from pointfree.frame import atoms
from pointfree.inner import inner_frame
from pointfree.order import find_isomorphism, powerset_lattice


@st.composite
def standard_sets(draw, dim=None, thinness=None):
    d = draw(st.integers(1, 3)) if dim is None else dim
    n = draw(st.integers(0, 5 if d == 1 else 3 if d == 2 else 2)) if thinness is None else thinness
    side = 2 ** n
    cubes = draw(st.sets(st.tuples(*[st.integers(-1, side) for _ in range(d)]), max_size=12))
    return StandardSet.from_cubes(d, n, cubes)


@st.composite
def pairs(draw):
    s = draw(standard_sets())
    t = draw(standard_sets(dim=s.dim))
    return s, t


def _fine_cells(s, n):
    return refine(s, n).cube_set()


@settings(max_examples=150, deadline=None)
@given(pairs())
def test_union_and_intersection_are_set_operations(pair):
    s, t = pair
    n = max(s.thinness, t.thinness)
    a, b = _fine_cells(s, n), _fine_cells(t, n)
    assert union_s(s, t).cube_set() == a | b
    assert intersect_s(s, t).cube_set() == a & b
    assert measure_standard(union_s(s, t)) + measure_standard(intersect_s(s, t)) == \
        measure_standard(s) + measure_standard(t)
    assert is_subset(intersect_s(s, t), s)


@settings(max_examples=80, deadline=None)
@given(standard_sets(), st.integers(0, 2))
def test_refinement_keeps_measure(s, extra):
    assert measure_standard(refine(s, s.thinness + extra)) == measure_standard(s)


@settings(max_examples=80, deadline=None)
@given(standard_sets(), st.data())
def test_translation_keeps_measure(s, data):
    vec = [Fraction(data.draw(st.integers(-8, 8)), 2 ** data.draw(st.integers(0, 3))) for _ in range(s.dim)]
    moved = translate_s(s, vec)
    assert measure_standard(moved) == measure_standard(s)
    back = translate_s(moved, [-x for x in vec])
    assert back.cube_set() == refine(s, back.thinness).cube_set()


@settings(max_examples=60, deadline=None)
@given(standard_sets(dim=2))
def test_transpose_swaps_axes(s):
    assert transpose2(s).cube_set() == {(y, x) for x, y in s.cube_set()}


def test_two_squares_example():
    a = StandardSet.from_cubes(2, 1, [(0, 0), (0, 1), (1, 0)])
    b = StandardSet.from_cubes(2, 1, [(1, 1), (1, 0), (0, 1)])
    assert measure_standard(union_s(a, b)) == 1
    assert measure_standard(intersect_s(a, b)) == Fraction(1, 2)
    with pytest.raises(DimMismatch):
        union_s(a, StandardSet.unit_cube(1))


def test_svc_closed_form():
    for k in range(21):
        assert measure_standard(svc_stage(k).set) == Fraction(1, 2) + Fraction(1, 2 ** (k + 1))
    assert [svc_stage(k).measure for k in range(4)] == [1, Fraction(3, 4), Fraction(5, 8), Fraction(9, 16)]


def test_svc_stage_two_intervals():
    # [0,3/8] u [5/8,1]
    s = svc_stage(1).set
    assert s.thinness == 3
    assert s.cube_set() == {(x,) for x in (0, 1, 2, 5, 6, 7)}


# shear oracle: the image of the unit square is the parallelogram with these corners
def _parallelogram(spec):
    return [spec.apply((Fraction(x), Fraction(y))) for x, y in ((0, 0), (1, 0), (1, 1), (0, 1))]


def _inside(poly, p):
    signs = set()
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        c = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
        if c:
            signs.add(c > 0)
    return len(signs) <= 1


def _meets(poly, box):
    # interiors overlap unless some edge normal separates them (touching counts as separated)
    def axes(pts):
        return [(-(b[1] - a[1]), b[0] - a[0]) for a, b in zip(pts, pts[1:] + pts[:1])]

    for ax in axes(poly) + axes(box):
        pa = [ax[0] * x + ax[1] * y for x, y in poly]
        pb = [ax[0] * x + ax[1] * y for x, y in box]
        if max(pa) <= min(pb) or max(pb) <= min(pa):
            return False
    return True


@pytest.mark.parametrize("i,j,a", [(1, 0, "1/2"), (0, 1, "1/2"), (1, 0, "-3/4"), (0, 1, "5/4")])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_shear_bracket_matches_polygon_oracle(i, j, a, n):
    spec = ShearSpec(i, j, Fraction(a))
    poly = _parallelogram(spec)
    inner, outer = shear_bracket(StandardSet.unit_cube(2), spec, n)
    h = Fraction(1, 2 ** n)
    want_in, want_out = set(), set()
    for cx, cy in product(range(-2 * 2 ** n, 3 * 2 ** n), repeat=2):
        box = [(cx * h, cy * h), ((cx + 1) * h, cy * h), ((cx + 1) * h, (cy + 1) * h), (cx * h, (cy + 1) * h)]
        if _meets(poly, box):
            want_out.add((cx, cy))
        if all(_inside(poly, c) for c in box):
            want_in.add((cx, cy))
    assert outer.cube_set() == want_out
    assert inner.cube_set() == want_in


def test_shear_gap_for_unit_square():
    spec = ShearSpec(1, 0, Fraction(1, 2))
    for n in range(4, 11):
        inner, outer = shear_bracket(StandardSet.unit_cube(2), spec, n)
        assert measure_standard(inner) <= 1 <= measure_standard(outer)
        assert measure_standard(outer) - measure_standard(inner) <= Fraction(4, 2 ** n)


def test_shear_scope():
    with pytest.raises(ScopeError):
        shear_bracket(StandardSet.unit_cube(3), ShearSpec(1, 0, Fraction(1, 2)), 2)
    with pytest.raises(ScopeError):
        shear_bracket(StandardSet.unit_cube(2), ShearSpec(1, 0, Fraction(1, 2)), 13)


def test_standard_set_site_of_unit_interval():
    v = standard_set_site(StandardSet.unit_cube(1), 2)
    assert sorted(set(v.values)) == [Fraction(k, 4) for k in range(5)]
    r = inner_frame(v)
    assert r.frame.size == 16 and r.boolean
    assert len(atoms(r.frame)) == 4
    assert find_isomorphism(r.frame.lattice, powerset_lattice("abcd")) is not None
