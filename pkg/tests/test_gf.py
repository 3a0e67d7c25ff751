import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgcode.errors import PreconditionError
from pgcode.gf import GF, Field, canonical_modulus, is_irreducible, prime_power, subfield_embed


def poly_mulmod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    h = len(modulus) - 1
    for d in range(len(prod) - 1, h - 1, -1):
        c = prod[d]
        if c:
            for i, m in enumerate(modulus):
                prod[d - h + i] = (prod[d - h + i] - c * m) % p
    return (prod + [0] * h)[:h]


ORDERS = [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]


@pytest.mark.parametrize("p,h", ORDERS)
def test_multiplication_matches_schoolbook(p, h):
    F = GF(p, h)
    for a, b in itertools.product(range(F.q), repeat=2):
        want = poly_mulmod(list(F.coeffs(a)), list(F.coeffs(b)), list(F.modulus), p)
        assert F.coeffs(int(F.mul(a, b))) == tuple(want)


@pytest.mark.parametrize("p,h", ORDERS)
def test_addition_is_coefficientwise(p, h):
    F = GF(p, h)
    for a, b in itertools.product(range(F.q), repeat=2):
        want = tuple((x + y) % p for x, y in zip(F.coeffs(a), F.coeffs(b)))
        assert F.coeffs(int(F.add(a, b))) == want


def test_f8_modulus_and_cube_of_generator():
    F = GF(2, 3)
    assert F.modulus == (1, 1, 0, 1)
    t = F(2)
    assert (t * t * t).coeffs == (1, 1, 0)


def test_canonical_modulus_is_smallest_irreducible():
    for p, h in [(2, 2), (3, 2), (2, 4), (5, 2)]:
        mod = canonical_modulus(p, h)
        code = sum(c * p**i for i, c in enumerate(mod[:-1]))
        for smaller in range(code):
            low = [(smaller // p**i) % p for i in range(h)]
            assert not is_irreducible(low + [1], p)


def test_trace_of_omega_in_f4():
    F = GF(2, 2)
    assert int(F.trace(2)) == 1
    assert [int(F.trace(x)) for x in range(4)] == [0, 0, 1, 1]


@pytest.mark.parametrize("p,h", [(2, 2), (3, 2), (2, 3)])
def test_trace_is_additive_onto_prime_field(p, h):
    F = GF(p, h)
    tr = [int(F.trace(x)) for x in range(F.q)]
    assert set(tr) == set(range(p))
    for a, b in itertools.product(range(F.q), repeat=2):
        assert tr[int(F.add(a, b))] == (tr[a] + tr[b]) % p


@pytest.mark.parametrize("small,big", [((2, 1), (2, 2)), ((2, 2), (2, 4)), ((3, 1), (3, 2)), ((2, 1), (2, 3))])
def test_embedding_is_a_ring_homomorphism(small, big):
    S, B = GF(*small), GF(*big)
    emb = B.embedding_from(S)
    assert len(set(emb.tolist())) == S.q
    for a, b in itertools.product(range(S.q), repeat=2):
        assert emb[int(S.add(a, b))] == B.add(emb[a], emb[b])
        assert emb[int(S.mul(a, b))] == B.mul(emb[a], emb[b])
    x = subfield_embed(S(1), B)
    assert x == B.one


def test_embedding_rejects_non_subfields():
    with pytest.raises(PreconditionError):
        GF(2, 3).embedding_from(GF(2, 2))


def test_vectorized_ops_agree_with_scalars():
    F = GF(3, 2)
    a = np.arange(9)
    b = (a * 4 + 1) % 9
    assert np.array_equal(F.mul(a, b), [F.mul(int(x), int(y)) for x, y in zip(a, b)])
    assert np.array_equal(F.sub(a, b), [F.sub(int(x), int(y)) for x, y in zip(a, b)])


def test_fresh_field_equals_cached():
    assert Field(2, 2) == GF(2, 2)


@pytest.mark.parametrize("q,ph", [(8, (2, 3)), (9, (3, 2)), (7, (7, 1)), (1, None), (12, None)])
def test_prime_power(q, ph):
    if ph is None:
        with pytest.raises(PreconditionError):
            prime_power(q)
    else:
        assert prime_power(q) == ph


def test_bad_characteristic():
    with pytest.raises(PreconditionError):
        GF(4, 1)


field_cases = st.sampled_from([GF(2, 3), GF(3, 2), GF(5, 1), GF(2, 4), GF(7, 2)])


@settings(max_examples=200, deadline=None)
@given(field_cases, st.data())
def test_field_axioms(F, data):
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    x, y, z = F(a), F(b), F(c)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x - x == F.zero
    if a:
        assert x * x.inv() == F.one
        assert x ** (F.q - 1) == F.one
    assert x.frobenius() ** (F.q // F.p) == x ** F.q
