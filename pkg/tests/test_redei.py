import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgcode.acceptance import projective_triangle, random_small_blocking_sets
from pgcode.blocking import PointSet, essential_points, is_minimal, minimal_reduce
from pgcode.errors import PreconditionError
from pgcode.geometry import projective_space
from pgcode.gf import GF
from pgcode.redei import (
    MPoly,
    all_slopes,
    alternative_frames,
    build_frame,
    divide_by_linear,
    linear_factor_points,
    nonessential_points,
    point_form,
    poly_divmod,
    redei_f,
    reduce_by_factors,
    root_multiplicities,
    slope_evaluate,
    unique_reduction_agrees,
)


def line_plus_point(n, q):
    sp = projective_space(n, q)
    line = sp.points_of(sp.enumerate_subspaces(1)[0]).tolist()
    P = next(i for i in range(sp.num_points) if i not in line)
    return PointSet(sp, tuple(line + [P])), P


def test_frame_for_line_plus_point_in_pg33():
    K, P = line_plus_point(3, 3)
    fr = build_frame(K)
    assert len(K) == 5 and fr.k == 1
    assert len(fr.at_infinity) == 1
    assert fr.affine.shape == (4, 3)
    # the hyperplane at infinity is tangent
    hp_pts = set(K.space.points_of(fr.hyperplane).tolist())
    assert len(hp_pts & set(K.indices)) == 1


def test_f_is_the_form_of_the_loose_point():
    K, P = line_plus_point(3, 3)
    fr = build_frame(K)
    rp = redei_f(fr)
    a = fr.affine[fr.affine_indices.index(P)]
    assert rp.f == point_form(K.space.field, a)
    assert nonessential_points(rp).indices == (P,)
    assert linear_factor_points(rp) == [tuple(int(x) for x in a)]


def test_line_in_pg25_has_no_loose_points():
    sp = projective_space(2, 5)
    L = PointSet(sp, tuple(sp.points_of(sp.enumerate_subspaces(1)[2]).tolist()))
    rp = redei_f(build_frame(L))
    assert rp.k == 0
    assert len(nonessential_points(rp)) == 0


@pytest.mark.parametrize("q", [5, 7])
def test_projective_triangle_is_minimal(q):
    T = projective_triangle(q)
    assert len(T) == 3 * (q + 1) // 2
    assert is_minimal(T, 1)
    rp = redei_f(build_frame(T))
    assert len(nonessential_points(rp)) == 0
    for m in all_slopes(2, q):
        slope_evaluate(rp, m)


def test_h_matches_product_of_point_forms():
    K, _ = line_plus_point(3, 3)
    fr = build_frame(K)
    rp = redei_f(fr)
    F = K.space.field
    rng = np.random.default_rng(0)
    for _ in range(30):
        x, m0, m1 = (int(v) for v in rng.integers(0, 3, size=3))
        direct = 1
        for a in fr.affine:
            direct = int(F.mul(direct, point_form(F, a).evaluate(x, [m0, m1])))
        assert rp.H.evaluate(x, [m0, m1]) == direct
    assert rp.degree_bounds_hold()


def test_slope_roots_locate_hyperplanes_through_loose_point():
    K, P = line_plus_point(3, 3)
    rp = redei_f(build_frame(K))
    for m in all_slopes(3, 3):
        rep = slope_evaluate(rp, m)
        assert rep.divisible and rep.splits
        assert sum(rep.roots.values()) == 1
        (x,) = rep.roots
        assert rep.hyperplane_hits[x] == 2
        assert all(c == 1 for y, c in rep.hyperplane_hits.items() if y != x)


def test_frame_independence():
    rng = np.random.default_rng(7)
    for K in random_small_blocking_sets(2, 7, 8, rng) + random_small_blocking_sets(3, 3, 8, rng):
        base = nonessential_points(redei_f(build_frame(K)))
        for fr in alternative_frames(K, 3, seed=len(K)):
            assert nonessential_points(redei_f(fr)) == base


def test_nonessential_matches_geometry():
    rng = np.random.default_rng(3)
    for K in random_small_blocking_sets(2, 5, 10, rng) + random_small_blocking_sets(3, 3, 10, rng):
        geo = set(K.indices) - set(essential_points(K, 1).indices)
        assert set(nonessential_points(redei_f(build_frame(K))).indices) == geo
        assert unique_reduction_agrees(K)
        assert reduce_by_factors(K) == minimal_reduce(K, 1)


def test_preconditions():
    sp = projective_space(2, 3)
    with pytest.raises(PreconditionError):
        build_frame(PointSet(sp, tuple(range(8))))
    with pytest.raises(PreconditionError):
        build_frame(PointSet(sp, (0, 1, 2)))
    with pytest.raises(PreconditionError):
        build_frame(PointSet(projective_space(1, 3), (0, 1)))
    # |K| <= 2q - 1 keeps k <= q - 2; a forced k = q - 1 is refused
    K, _ = line_plus_point(2, 3)
    rp = redei_f(build_frame(K))
    assert rp.k == 1
    with pytest.raises(PreconditionError):
        slope_evaluate(dataclasses.replace(rp, k=2), [0])


def test_divide_by_linear_is_exact():
    F = GF(5)
    a = point_form(F, [1, 2, 3])
    b = point_form(F, [4, 0, 1])
    prod = a * b
    c = -MPoly.linear(F, 0, [4, 0], int(F.neg(1)))
    quo, rem = divide_by_linear(prod, c)
    assert rem.is_zero() and quo == a


def test_root_multiplicities():
    F = GF(7)
    # (X - 2)^2 (X - 5) = X^3 - 9X^2 + 24X - 20
    poly = [int(F.from_int(-20)), 24 % 7, int(F.from_int(-9)), 1]
    assert root_multiplicities(poly, F) == {2: 2, 5: 1}
    q, r = poly_divmod(poly, [int(F.neg(5)), 1], F)
    assert not r and root_multiplicities(q, F) == {2: 2}


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2)), st.integers(0, 6), max_size=6
)


@settings(max_examples=60, deadline=None)
@given(poly_terms, poly_terms, st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_mpoly_ring_operations_evaluate_pointwise(ta, tb, x, u, v):
    F = GF(7)
    A, B = MPoly(F, 2, ta), MPoly(F, 2, tb)
    ea, eb = A.evaluate(x, [u, v]), B.evaluate(x, [u, v])
    assert (A * B).evaluate(x, [u, v]) == int(F.mul(ea, eb))
    assert (A + B).evaluate(x, [u, v]) == int(F.add(ea, eb))
    assert (A - B).evaluate(x, [u, v]) == int(F.sub(ea, eb))
    uni = A.univariate([u, v])
    acc = 0
    for d, c in enumerate(uni):
        acc = int(F.add(acc, F.mul(c, F.pow(x, d))))
    assert acc == ea
