import numpy as np
import pytest

import oracles
from torsmut.algebra import builtin_algebra
from torsmut.errors import AmbientIncomplete, BoundExceeded, TorsmutError
from torsmut.indec import (closed_form_indecomposables, enumerate_indecomposables,
                           kronecker_preinjective, kronecker_preprojective)
from torsmut.reps import (direct_sum, is_brick, is_indecomposable,
                          is_isomorphic, multisets_isomorphic, validate_rep)


@pytest.mark.parametrize("name,count", [("point", 1), ("a2", 3), ("a3", 6), ("an:4", 10),
                                        ("nakayama:3,2", 6), ("nakayama:2,3", 6), ("nakayama:3,3", 9)])
def test_knitting_matches_closed_form(name, count):
    ind = enumerate_indecomposables(builtin_algebra(name), 7)
    ref = closed_form_indecomposables(name)
    assert ind.complete
    assert len(ind) == len(ref) == count
    assert multisets_isomorphic(list(ind), list(ref))


@pytest.mark.parametrize("name", ["a3", "nakayama:3,2"])
def test_items_are_distinct_valid_indecomposables(name):
    ind = oracles.ambient(name)
    for X in ind:
        assert validate_rep(X) is None
        assert is_indecomposable(X)
    for i in range(len(ind)):
        for j in range(i + 1, len(ind)):
            assert not is_isomorphic(ind[i], ind[j])


def test_linear_a_indecomposables_are_bricks():
    assert all(is_brick(X) for X in oracles.ambient("a3"))


def test_identify_random_bases():
    ind = oracles.ambient("nakayama:3,2")
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = rng.integers(len(ind), size=2)
        X, _ = oracles.random_conjugate(direct_sum(ind[a], ind[b]), rng)
        assert ind.identify(X) == sorted([int(a), int(b)])


def test_identify_outside_list():
    alg = builtin_algebra("a3")
    small = enumerate_indecomposables(alg, 2, certify=False)
    big = oracles.ambient("a3")
    P1 = next(X for X in big if X.total_dim == 3)
    with pytest.raises(AmbientIncomplete):
        small.identify(P1)
    assert small.try_identify(P1) == [None]


def test_small_bound_not_complete():
    ind = enumerate_indecomposables(builtin_algebra("a3"), 2)
    assert len(ind) == 5
    assert not ind.complete
    with pytest.raises(BoundExceeded):
        enumerate_indecomposables(builtin_algebra("a3"), 2, strict=True)


def test_kronecker_slice():
    alg = builtin_algebra("kronecker")
    ind = enumerate_indecomposables(alg, 5)
    assert not ind.complete
    with pytest.raises(BoundExceeded):
        enumerate_indecomposables(alg, 3, strict=True)
    for k in range(3):
        assert ind.find(kronecker_preprojective(alg, k)) is not None
        assert ind.find(kronecker_preinjective(alg, k)) is not None
    # dimension vectors of the slice: preprojectives, preinjectives and the p + 1 = 3
    # regular bricks of dim (1, 1), plus regular modules of dim (2, 2)
    dims = sorted(X.dims for X in ind)
    assert dims.count((1, 1)) == 3
    assert (1, 2) in dims and (2, 1) in dims and (2, 3) in dims and (3, 2) in dims


def test_kronecker_modules_valid():
    alg = builtin_algebra("kronecker")
    for k in range(4):
        P, I = kronecker_preprojective(alg, k), kronecker_preinjective(alg, k)
        assert P.dims == (k, k + 1) and I.dims == (k + 1, k)
        assert is_brick(P) and is_brick(I)


def test_closed_form_rejects_kronecker():
    with pytest.raises(TorsmutError):
        closed_form_indecomposables("kronecker")


def test_bad_bound():
    with pytest.raises(TorsmutError):
        enumerate_indecomposables(builtin_algebra("a2"), 0)


def test_field_three():
    ind = enumerate_indecomposables(builtin_algebra("a3", p=3), 7)
    assert ind.complete and len(ind) == 6
