import itertools
from collections import Counter

import numpy as np
import pytest

from pgcode.blocking import is_baer_subplane, is_k_blocking_set, is_subspace_set
from pgcode.errors import PreconditionError
from pgcode.spread import (
    companion_blocking_set,
    field_reduce,
    is_trivial_witness,
    linear_blocking_set,
    tangent_or_contained_points,
    uniqueness_check,
)


def brute_b_of_u(spread, U):
    """Small-space points of every nonzero F_p combination of the basis of U."""
    basis = np.array(U.basis)
    out = set()
    for coeffs in itertools.product(range(spread.p), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = (np.array(coeffs) @ basis) % spread.p
        small = [sum(int(v[j * spread.h + i]) * spread.p**i for i in range(spread.h)) for j in range(spread.n + 1)]
        out.add(spread.small.index(small))
    return out


@pytest.fixture(scope="module")
def pg24():
    return field_reduce(2, 2, 2)


def test_spread_partitions_points(pg24):
    assert pg24.big.n == 5
    owner = Counter(pg24.lookup.tolist())
    assert len(owner) == 21
    assert set(owner.values()) == {3}
    for i, e in enumerate(pg24.elements):
        assert e.dim == 1
        assert set(pg24.big.points_of(e).tolist()) == set(pg24.element_points(i).tolist())


def test_elements_are_scalar_multiples(pg24):
    F = pg24.field
    for i in range(pg24.small.num_points):
        x = np.array(pg24.small.point(i))
        multiples = {pg24.big.index(pg24.to_big_vectors(np.asarray(F.mul(lam, x)))) for lam in range(1, 4)}
        assert multiples == set(pg24.element_points(i).tolist())


def test_vector_conversion_roundtrip(pg24):
    v = np.array([[3, 1, 2], [0, 2, 1]])
    assert np.array_equal(pg24.to_small_vectors(pg24.to_big_vectors(v)), v)


def test_image_of_line_holds_five_elements(pg24):
    line = pg24.small.enumerate_subspaces(1)[4]
    img = pg24.image(line)
    assert img.dim == 3
    pts = set(pg24.big.points_of(img).tolist())
    inside = [i for i in range(21) if set(pg24.element_points(i).tolist()) <= pts]
    assert len(inside) == 5
    assert set(inside) == set(pg24.small.points_of(line).tolist())


def test_all_planes_of_pg52(pg24):
    sizes = Counter()
    for U in pg24.big.enumerate_subspaces(2):
        w = linear_blocking_set(U, pg24, 1)
        assert set(w.B.indices) == brute_b_of_u(pg24, U)
        holds_element = any(set(pg24.element_points(i).tolist()) <= set(pg24.big.points_of(U).tolist()) for i in range(21))
        if holds_element:
            assert len(w.B) == 5 and is_subspace_set(w.B).dim == 1
        else:
            assert len(w.B) == 7 and is_baer_subplane(w.B)
        assert len(w.B) % 2 == 1
        assert w.one_point_elements >= 3
        sizes[len(w.B)] += 1
    assert sizes == {5: 315, 7: 1080}


def test_pg29_random_planes():
    sp = field_reduce(2, 3, 2)
    rng = np.random.default_rng(11)
    seen = set()
    for _ in range(25):
        while True:
            U = sp.big.subspace(rng.integers(0, 3, size=(3, 6)))
            if U.dim == 2:
                break
        w = linear_blocking_set(U, sp, 1)
        assert set(w.B.indices) == brute_b_of_u(sp, U)
        assert len(w.B) % 3 == 1
        assert is_k_blocking_set(w.B, 1)
        seen.add(len(w.B))
    assert seen <= {10, 13}


def test_wrong_dimension_rejected(pg24):
    with pytest.raises(PreconditionError):
        linear_blocking_set(pg24.big.enumerate_subspaces(1)[0], pg24, 1)


def test_b_of_u_needs_reduced_space(pg24):
    with pytest.raises(PreconditionError):
        pg24.b_of_u(pg24.small.enumerate_subspaces(1)[0])


def first_baer_witness(sp):
    for U in sp.big.enumerate_subspaces(2):
        w = linear_blocking_set(U, sp, 1)
        if not is_trivial_witness(w):
            return w
    raise AssertionError


def test_companion_in_pg24(pg24):
    w = first_baer_witness(pg24)
    c = companion_blocking_set(w, pg24)
    inter = len(set(w.B.indices) & set(c.B.indices))
    assert inter % 2 == 0 and inter == c.provenance["intersection"]
    assert c.B != w.B
    assert is_k_blocking_set(c.B, 1)


def test_companion_in_pg29():
    sp = field_reduce(2, 3, 2)
    rng = np.random.default_rng(5)
    while True:
        U = sp.big.subspace(rng.integers(0, 3, size=(3, 6)))
        if U.dim == 2:
            w = linear_blocking_set(U, sp, 1)
            if not is_trivial_witness(w):
                break
    c = companion_blocking_set(w, sp)
    assert len(set(w.B.indices) & set(c.B.indices)) % 3 == 2


def test_companion_refuses_subspaces(pg24):
    for U in pg24.big.enumerate_subspaces(2):
        w = linear_blocking_set(U, pg24, 1)
        if is_trivial_witness(w):
            with pytest.raises(PreconditionError):
                companion_blocking_set(w, pg24)
            return


def test_uniqueness_check(pg24):
    U1 = pg24.big.enumerate_subspaces(1)[0]
    base = set(pg24.b_of_u(U1).indices)
    outside = [i for i in range(21) if i not in base]
    found = 0
    for R1, R2 in itertools.combinations(outside, 2):
        B = uniqueness_check(U1, R1, R2, pg24)
        if B is None:
            continue
        found += 1
        assert R1 in B and R2 in B
        # every extension through R1 meeting R2 gives this same set
        for x in pg24.element_points(R1).tolist():
            U = pg24.big.span([U1, x])
            if pg24.element_hits(U)[R2]:
                assert pg24.b_of_u(U) == B
    assert found > 0
    assert uniqueness_check(U1, next(iter(base)), outside[0], pg24) is None


def test_baer_subplane_has_no_tangent_or_contained_points(pg24):
    w = first_baer_witness(pg24)
    assert tangent_or_contained_points(w.B) == []


def test_witness_json(pg24):
    w = first_baer_witness(pg24)
    js = w.to_json(pg24)
    assert js["reduced_space"] == {"n": 5, "p": 2}
    assert js["verified"] is True and len(js["points"]) == 7
