import math
from fractions import Fraction

import pytest

from pgcode.analysis import (
    BoundReport,
    Bound,
    gap_verdict,
    table1_row,
    table_bounds,
    small_blocking_size_window,
    size_cap_expression,
)
from pgcode.errors import PreconditionError
from pgcode.geometry import theta


@pytest.mark.parametrize(
    "p,h,n,k,lo,up",
    [
        (3, 1, 2, 1, 6, 6),
        (2, 1, 3, 1, 8, 8),
        (2, 1, 3, 2, 4, 4),
        (3, 1, 3, 2, 6, 6),
        (2, 2, 2, 1, 6, 6),
        (2, 2, 3, 1, 23, 24),
        (5, 2, 2, 1, 36, 45),
        (7, 2, 2, 1, 86, 91),
        (11, 2, 2, 1, 210, 231),
    ],
)
def test_bound_values(p, h, n, k, lo, up):
    row, lower, upper, _ = table_bounds(p, h, n, k)
    assert (lower.value, upper.value) == (lo, up)


def test_bound_formulas_by_hand():
    # q = 25: ceil((4*26 + 2)/3) and 2*25 + 1 - 24/4
    assert table_bounds(5, 2, 2, 1)[1].value == math.ceil(Fraction(106, 3))
    # q = 49: (12*50 + 2)/7; q = 121: (12*122 + 6)/7
    assert table_bounds(7, 2, 2, 1)[1].value == math.ceil(Fraction(602, 7))
    assert table_bounds(11, 2, 2, 1)[1].value == 210


def test_tags():
    assert table_bounds(3, 1, 2, 1)[1].tag == "thm:priem"
    assert table_bounds(5, 2, 2, 1)[0] == "tbl:1:row3"
    assert table_bounds(7, 2, 2, 1)[1].tag == "thm:th8"
    row, lower, upper, notes = table_bounds(2, 2, 2, 1)
    assert lower.tag == "rem:trivial" and upper.tag == "cor:ba" and notes
    assert table_bounds(2, 2, 3, 1)[1].tag == "tbl:1:row1"


def test_bounds_need_proper_k():
    with pytest.raises(PreconditionError):
        table_bounds(2, 1, 2, 2)


@pytest.mark.parametrize("args,exact", [((3, 1, 2, 1), 6), ((2, 2, 2, 1), 6), ((2, 1, 3, 1), 8), ((2, 1, 3, 2), 4), ((3, 1, 3, 2), 6)])
def test_rows_consistent_with_enumeration(args, exact):
    rep = table1_row(*args)
    assert rep.exact == exact
    assert rep.verdict == "consistent"
    js = rep.to_json()
    assert js["schema"] == "pgcode.bounds.v1" and js["exact"]["value"] == exact


def test_out_of_scale_row_is_not_computed():
    rep = table1_row(5, 2, 2, 1)
    assert rep.exact is None and rep.verdict == "not-computed"
    assert rep.construction_weight == 45


def test_q8_construction_exceeds_stated_upper():
    rep = table1_row(2, 3, 2, 1, exact=False)
    assert rep.upper.value == 10
    assert rep.construction_weight == 12
    assert any("not realized" in n for n in rep.notes)


def test_verdict_logic():
    r = BoundReport(2, 1, 2, 1, "x", Bound(4, "a"), Bound(4, "b"), exact=5)
    assert r.verdict == "falsifying"
    r = BoundReport(2, 1, 2, 1, "x", Bound(5, "a"), Bound(4, "b"))
    assert r.verdict == "falsifying"


def test_gap_c123():
    rep = gap_verdict(2, 3, 1)
    first = rep.interval("]theta_k, 2q^k[")
    assert first.weights == [] and first.applies
    assert rep.verdict == "consistent"
    second = rep.interval("]theta_k, (12theta_k+6)/7[")
    assert not second.applies
    assert second.weights and all(4 < w < Fraction(54, 7) for w in second.weights)
    assert second.witnesses


def test_gap_c124_has_no_claim():
    rep = gap_verdict(2, 4, 1)
    assert rep.verdict == "consistent"
    assert not any(iv.applies for iv in rep.intervals)


def test_gap_large_space_not_computed():
    assert gap_verdict(2, 49, 1).verdict == "not-computed"


def test_small_blocking_size_windows():
    w = small_blocking_size_window(1, 3, 1, 9)
    assert (w.lower, w.upper) == (11, 15)
    assert w.contains(13)
    w = small_blocking_size_window(3, 2, 1, 8)
    assert (w.lower, w.upper) == (8, 10)
    assert w.contains(9)
    w = small_blocking_size_window(1, 2, 1, 4)
    assert w.upper is None and w.lower == 5
    assert size_cap_expression(1, 2, 1, 4) == 8
    with pytest.raises(PreconditionError):
        small_blocking_size_window(0, 2, 1, 4)


def test_trivial_lower_is_theta_plus_one():
    for h in (2, 3):
        q = 2**h
        assert table_bounds(2, h, 2, 1)[1].value == theta(1, q) + 1
