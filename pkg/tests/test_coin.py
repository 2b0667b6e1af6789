from __future__ import annotations

from fractions import Fraction

import pytest

from pointfree.coin import (
    coin_site,
    fat_cantor,
    no_complement_fibers,
    projection_hom,
    recurrence_value,
    verify_no_complement,
)
from pointfree.errors import CapExceeded


def _brute_fat_cantor(k):
    """Stages over explicit toss strings: A_n keeps extensions of A_{n-1} and adds one point per fiber."""
    a = {"0"}
    out = [a]
    for n in range(2, k + 1):
        prev_len, cur_len = (n - 1) ** 2, n * n
        nxt = set()
        for w in (format(x, f"0{prev_len}b") for x in range(2 ** prev_len)):
            tails = [format(t, f"0{cur_len - prev_len}b") for t in range(2 ** (cur_len - prev_len))]
            if w in a:
                nxt.update(w + t for t in tails)
            else:
                nxt.add(w + tails[0])
        a = nxt
        out.append(a)
    return out


def test_stage_measures_match_explicit_strings():
    stages = fat_cantor(3)
    for st, brute in zip(stages, _brute_fat_cantor(3)):
        assert st.measure == Fraction(len(brute), 2 ** (st.n ** 2))


def test_fat_cantor_values_and_recurrence():
    stages = fat_cantor(4)
    assert stages[0].measure == Fraction(1, 2)
    assert stages[1].measure == Fraction(9, 16)
    for prev, cur in zip(stages, stages[1:]):
        assert cur.measure == recurrence_value(prev.measure, cur.n)
    assert all(s.measure <= Fraction(2, 3) for s in stages)


@pytest.mark.parametrize("k,fibers", [(1, 1), (2, 7), (3, 217)])
def test_no_complement(k, fibers):
    stages = fat_cantor(k + 1)
    assert verify_no_complement(stages, k)
    assert no_complement_fibers(stages, k) == (True, fibers)


def test_caps():
    with pytest.raises(CapExceeded):
        fat_cantor(5)
    with pytest.raises(CapExceeded):
        coin_site(3).site()


def test_projection_preserves_uniform_measure():
    hom = projection_hom(2)
    low, high = coin_site(1), coin_site(2)
    for s in hom.source.elements:
        assert low.measure(s) == high.measure(hom(s))
