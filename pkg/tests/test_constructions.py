import numpy as np
import pytest

from pgcode.blocking import PointSet, is_baer_subplane, is_k_blocking_set, is_minimal
from pgcode.codes import code_from_incidence, contains, dual
from pgcode.constructions import (
    difference_codeword,
    embed_codeword,
    find_projection,
    hyperoval_codeword,
    power_basis,
    project_codeword,
    blocking_difference_codeword,
    trace_blocking_set,
    trace_codeword,
    trace_upper_bound,
)
from pgcode.errors import PreconditionError
from pgcode.geometry import projective_space
from pgcode.gf import GF


def in_dual(space, k, word):
    """Orthogonality against every k-space, straight from the incidence matrix."""
    m = space.incidence(k).astype(np.int64)
    return not ((m @ np.asarray(word, dtype=np.int64)) % space.p).any()


def brute_trace_set(p, h):
    """{(1, x, Tr x)} and {(0, x, Tr x) : x != 0} in PG(2, p^h), built by hand."""
    F = GF(p, h)
    sp = projective_space(2, F.q)
    emb = F.embedding_from(GF(p))
    pts = set()
    for x in range(F.q):
        t = int(emb[int(F.trace(x))])
        pts.add(sp.index((1, x, t)))
        if x:
            pts.add(sp.index((0, x, t)))
    return sp, pts


def meeting_lines(space):
    lines = space.enumerate_subspaces(1)
    a = lines[0]
    b = next(l for l in lines[1:] if space.meet(a, l).dim == 0)
    return a, b


def test_difference_of_meeting_lines_pg32():
    sp = projective_space(3, 2)
    a, b = meeting_lines(sp)
    w = difference_codeword(sp, a, b, 2)
    assert w.weight == 4 and w.verified
    assert in_dual(sp, 2, w.codeword)


def test_difference_in_pg33_plane():
    sp = projective_space(3, 3)
    a, b = meeting_lines(sp)
    w = difference_codeword(sp, a, b, 2)
    assert w.weight == 6
    assert in_dual(sp, 2, w.codeword)
    assert set(np.unique(w.codeword).tolist()) == {0, 1, 2}


def test_difference_rejects_small_subspaces():
    sp = projective_space(3, 2)
    pts = sp.enumerate_subspaces(0)
    with pytest.raises(PreconditionError):
        difference_codeword(sp, pts[0], pts[1], 2)


@pytest.mark.parametrize("p,h,size,x", [(2, 2, 7, 3), (2, 3, 13, 5), (3, 2, 13, 4)])
def test_trace_sets_match_hand_construction(p, h, size, x):
    tb = trace_blocking_set(p, h, 1)
    sp, pts = brute_trace_set(p, h)
    assert set(tb.points.indices) == pts
    assert len(pts) == size and tb.x == x
    assert tb.local_blocking and tb.local_minimal
    assert is_minimal(PointSet(sp, tuple(pts)), 1)


def test_q4_trace_set_is_baer():
    tb = trace_blocking_set(2, 2, 1)
    assert is_baer_subplane(tb.points)
    assert tb.matches_formula


def test_q8_trace_set_departs_from_scattered_count():
    tb = trace_blocking_set(2, 3, 1)
    assert tb.formula_x == 7
    assert tb.x == 5 and not tb.matches_formula


@pytest.mark.parametrize("p,h,wt", [(2, 2, 6), (3, 2, 15), (2, 3, 12)])
def test_trace_codeword_weights(p, h, wt):
    w = trace_codeword(p, h, 2, 1)
    assert w.weight == wt
    assert in_dual(w.space, 1, w.codeword)


def test_trace_codeword_meets_bound_when_formula_holds():
    assert trace_codeword(2, 2, 2, 1).weight == trace_upper_bound(2, 4, 1) == 6
    assert trace_codeword(3, 2, 2, 1).weight == trace_upper_bound(2, 9, 1) == 15
    assert trace_upper_bound(2, 8, 1) == 10


def test_trace_set_padded_into_larger_space():
    tb = trace_blocking_set(2, 2, 1, n=3, k=2)
    assert tb.points.space.n == 3
    assert is_k_blocking_set(tb.points, 1)
    w = blocking_difference_codeword(tb.points, tb.witness, 2)
    assert w.weight == 6 and in_dual(w.space, 2, w.codeword)


def test_blocking_difference_checks_intersection():
    tb = trace_blocking_set(2, 2, 1)
    sp, members = tb.points.space, set(tb.points.indices)
    other = next(s for s in sp.enumerate_subspaces(1) if len(members & set(sp.points_of(s).tolist())) == 1)
    with pytest.raises(PreconditionError):
        blocking_difference_codeword(tb.points, other, 1)


def test_hyperoval():
    w = hyperoval_codeword(4)
    assert w.weight == 6
    sizes = w.space.incidence(1).astype(int) @ (w.codeword > 0)
    assert set(sizes.tolist()) == {0, 2}
    assert contains(dual(code_from_incidence(2, 4, 1)), w.codeword)
    with pytest.raises(PreconditionError):
        hyperoval_codeword(9)


def test_projection_pg32_to_fano():
    sp = projective_space(3, 2)
    a, b = meeting_lines(sp)
    c = difference_codeword(sp, a, b, 2)
    R, H = find_projection(c)
    img = project_codeword(c, R, H)
    assert img.space.n == 2 and img.k == 1
    assert 0 < img.weight <= 4
    assert in_dual(img.space, 1, img.codeword)


def test_projection_without_cancellation_keeps_weight():
    sp = projective_space(3, 3)
    a, b = meeting_lines(sp)
    c = difference_codeword(sp, a, b, 2)
    R, H = find_projection(c)
    img = project_codeword(c, R, H)
    assert img.weight == c.weight == 6
    assert in_dual(img.space, 1, img.codeword)


def test_projection_with_cancellation_drops_weight():
    sp = projective_space(3, 3)
    lines = sp.enumerate_subspaces(1)
    a = lines[0]
    b = next(l for l in lines if sp.meet(a, l).is_empty)
    c = difference_codeword(sp, a, b, 2)
    assert c.weight == 8
    R, H = find_projection(c)
    img = project_codeword(c, R, H)
    assert img.weight < c.weight
    assert in_dual(img.space, 1, img.codeword)


def test_projection_preconditions():
    sp = projective_space(3, 2)
    a, b = meeting_lines(sp)
    c = difference_codeword(sp, a, b, 2)
    supp = int(np.flatnonzero(c.codeword)[0])
    H = sp.enumerate_subspaces(2)[0]
    with pytest.raises(PreconditionError):
        project_codeword(c, supp, H)
    plane = projective_space(2, 4)
    with pytest.raises(PreconditionError):
        project_codeword(hyperoval_codeword(4), 0, plane.enumerate_subspaces(1)[0])


def test_embedding_hyperoval_into_pg34():
    sp = projective_space(3, 4)
    w = hyperoval_codeword(4)
    pi = sp.enumerate_subspaces(2)[5]
    e = embed_codeword(w.codeword, pi, sp, 2)
    assert e.weight == 6
    assert in_dual(sp, 2, e.codeword)


def test_embedding_rejects_non_dual_words():
    sp = projective_space(3, 2)
    bad = np.zeros(7, dtype=np.int64)
    bad[0] = 1
    with pytest.raises(PreconditionError):
        embed_codeword(bad, sp.enumerate_subspaces(2)[0], sp, 2)


def test_power_basis_spans():
    big, small = GF(2, 4), GF(2, 2)
    basis = power_basis(big, small)
    assert len(basis) == 2 and basis[0] == 1


def test_witness_json_shape():
    js = hyperoval_codeword(4).to_json()
    assert js["construction"] == "hyperoval" and js["weight"] == 6
    assert len(js["support"]) == 6 and js["verified"]
