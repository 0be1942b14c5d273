from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsmut import linalg
from torsmut.errors import CapExceeded, InconsistentSystem

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=5, max_cols=5, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    flat = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(flat, dtype=np.int64).reshape(r, c), p


def test_rank_nullity_exhaustive_small_gf2():
    # every 0/1 matrix up to 3x3
    for r, c in product(range(1, 4), repeat=2):
        for bits in product((0, 1), repeat=r * c):
            m = np.array(bits, dtype=np.int64).reshape(r, c)
            K = linalg.kernel_basis(m, 2)
            assert linalg.rank(m, 2) + K.shape[1] == c
            assert not np.any(linalg.mul(m, K, p=2))


@given(matrices())
def test_rank_nullity(mp):
    m, p = mp
    K = linalg.kernel_basis(m, p)
    assert linalg.rank(m, p) + K.shape[1] == m.shape[1]
    if K.size:
        assert not np.any(linalg.mul(m, K, p=p))
        assert linalg.rank(K, p) == K.shape[1]


@given(matrices())
def test_rref_idempotent_and_row_space(mp):
    m, p = mp
    r, piv = linalg.rref(m, p)
    r2, piv2 = linalg.rref(r, p)
    assert np.array_equal(r, r2) and piv == piv2
    assert linalg.rank(np.vstack([m, r]) if m.size else r, p) == len(piv) if m.shape[0] else True
    for k, c in enumerate(piv):
        assert r[k, c] == 1
        assert np.count_nonzero(r[:, c]) == 1


@given(matrices(max_rows=4, max_cols=4))
def test_left_kernel(mp):
    m, p = mp
    L = linalg.left_kernel(m, p)
    assert L.shape[0] + linalg.rank(m, p) == m.shape[0]
    if L.size and m.size:
        assert not np.any(linalg.mul(L, m, p=p))


@given(matrices(max_rows=4, max_cols=4), st.data())
def test_solve_consistent(mp, data):
    m, p = mp
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])),
                 dtype=np.int64).reshape(-1, 1)
    b = linalg.mul(m, x, p=p)
    y = linalg.solve(m, b, p)
    assert np.array_equal(linalg.mul(m, y, p=p), b)


def test_solve_inconsistent():
    m = np.array([[1, 0], [1, 0]])
    with pytest.raises(InconsistentSystem):
        linalg.solve(m, np.array([[1], [0]]), 2)


@given(st.sampled_from(PRIMES), st.integers(1, 4), st.data())
def test_inverse(p, n, data):
    flat = data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    m = np.array(flat, dtype=np.int64).reshape(n, n)
    if linalg.is_invertible(m, p):
        assert np.array_equal(linalg.mul(m, linalg.inverse(m, p), p=p), linalg.identity(n))
    else:
        assert linalg.rank(m, p) < n


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", range(5))
def test_subspace_count_matches_gaussian_binomial(p, n):
    for k in range(n + 1):
        subs = list(linalg.subspace_rrefs(n, k, p))
        assert len(subs) == linalg.gaussian_binomial(n, k, p)
        keys = {s.tobytes() for s in subs}
        assert len(keys) == len(subs)
        for s in subs:
            assert linalg.rank(s, p) == k
            assert np.array_equal(linalg.rref(s, p)[0][:k], s)


def test_gaussian_binomial_values():
    assert linalg.gaussian_binomial(4, 2, 2) == 35
    assert linalg.gaussian_binomial(3, 1, 3) == 13
    assert linalg.gaussian_binomial(3, 4, 2) == 0


def test_enumerate_subspaces_returns_column_bases():
    subs = linalg.enumerate_subspaces(3, 2, 2)
    assert len(subs) == 7
    assert all(s.shape == (3, 2) for s in subs)


def test_subspace_cap():
    with pytest.raises(CapExceeded):
        list(linalg.subspace_rrefs(10, 5, 2, cap=100))


@given(matrices(max_rows=4, max_cols=4), st.data())
def test_quotient_space_round_trip(mp, data):
    m, p = mp
    if m.shape[0] == 0:
        return
    k = data.draw(st.integers(0, m.shape[0]))
    sub = m[:k]
    Q = linalg.QuotientSpace(m, sub, p)
    assert Q.dim == linalg.rank(m, p) - (linalg.rank(sub, p) if k else 0)
    coeffs = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=Q.dim, max_size=Q.dim)), dtype=np.int64)
    v = Q.lift(coeffs)
    assert np.array_equal(Q.coords(v), coeffs % p)
    # members of sub have zero coordinates
    for row in sub:
        assert not np.any(Q.coords(row))


def test_quotient_space_rejects_outside_vector():
    Q = linalg.QuotientSpace(np.array([[1, 0, 0]]), np.zeros((0, 3), dtype=np.int64), 2)
    with pytest.raises(InconsistentSystem):
        Q.coords(np.array([0, 1, 0]))


@settings(max_examples=50)
@given(matrices(max_rows=4, max_cols=4))
def test_in_span_matches_rank(mp):
    m, p = mp
    if m.shape[0] < 2:
        return
    basis, v = m[:-1], m[-1]
    assert linalg.in_span(basis, v, p) == (linalg.rank(m, p) == linalg.rank(basis, p))


def test_is_prime():
    assert [q for q in range(20) if linalg.is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
