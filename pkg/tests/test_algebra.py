import pytest

from torsmut.algebra import (AlgebraFamily, Arrow, Quiver, QuiverAlgebra,
                             build_algebra, builtin_algebra, check_path_basis,
                             projectives, simples, standard_module,
                             total_projective_dim)
from torsmut.errors import MalformedRelation, NotFiniteDimensional, TorsmutError
from torsmut.reps import hom_dim, validate_rep


@pytest.mark.parametrize("text,tag,n,ell", [
    ("a2", "linear_an", 2, 2),
    ("an:4", "linear_an", 4, 2),
    ("nakayama:3,2", "cyclic_nakayama", 3, 2),
    ("Kronecker", "kronecker", 1, 2),
    ("point", "point", 1, 2),
])
def test_family_parse(text, tag, n, ell):
    f = AlgebraFamily.parse(text)
    assert (f.tag, f.n, f.ell) == (tag, n, ell)


@pytest.mark.parametrize("text", ["loop", "an:", "nakayama:3", "a0", "nakayama:3,1"])
def test_family_parse_rejects(text):
    with pytest.raises(TorsmutError):
        AlgebraFamily.parse(text)


@pytest.mark.parametrize("name,dim", [("point", 1), ("a2", 3), ("a3", 6), ("nakayama:3,2", 6),
                                      ("nakayama:2,3", 6), ("kronecker", 4)])
def test_builtin_dimensions(name, dim):
    alg = builtin_algebra(name)
    assert alg.dim == dim
    assert check_path_basis(alg)
    assert total_projective_dim(alg) == dim


def test_path_basis_closed_under_subpaths():
    alg = builtin_algebra("an:5")
    assert alg.dim == 15
    assert check_path_basis(alg)


def test_infinite_algebra_rejected():
    q = Quiver(("1",), (Arrow("x", "1", "1"),))
    with pytest.raises(NotFiniteDimensional):
        build_algebra(q, [], cap=50)


@pytest.mark.parametrize("rel", [("a",), ("a", "zz"), ("a", "a")])
def test_malformed_relations(rel):
    q = Quiver(("1", "2"), (Arrow("a", "1", "2"),))
    with pytest.raises(MalformedRelation):
        build_algebra(q, [rel])


def test_non_prime_field():
    with pytest.raises(TorsmutError):
        builtin_algebra("a2", p=4)


def test_quiver_validation():
    with pytest.raises(TorsmutError):
        Quiver(("1", "1"), ())
    with pytest.raises(TorsmutError):
        Quiver(("1",), (Arrow("a", "1", "9"),))


@pytest.mark.parametrize("name", ["a2", "a3", "nakayama:3,2", "nakayama:2,3", "kronecker"])
def test_standard_modules_valid(name):
    alg = builtin_algebra(name)
    for kind in ("projective", "injective", "simple"):
        for v in alg.vertices:
            X = standard_module(alg, kind, v)
            assert validate_rep(X) is None
    # Hom(P(v), X) = X_v and Hom(X, I(v)) = X_v
    for v in alg.vertices:
        P = standard_module(alg, "projective", v)
        I = standard_module(alg, "injective", v)
        for w in alg.vertices:
            S = standard_module(alg, "simple", w)
            expect = 1 if v == w else 0
            assert hom_dim(P, S) == expect
            assert hom_dim(S, I) == expect


def test_projective_dims_a3():
    alg = builtin_algebra("a3")
    P = projectives(alg)
    assert P["1"].dims == (1, 1, 1)
    assert P["3"].dims == (0, 0, 1)
    assert all(S.total_dim == 1 for S in simples(alg).values())


def test_json_round_trip():
    alg = builtin_algebra("nakayama:3,2", p=3)
    back = QuiverAlgebra.from_json(alg.to_json())
    assert back.p == 3
    assert back.dim == alg.dim
    assert back.relations == alg.relations


def test_malformed_json():
    with pytest.raises(TorsmutError):
        QuiverAlgebra.from_json({"vertices": ["1"]})
