import pytest

import oracles
from torsmut.algebra import builtin_algebra
from torsmut.errors import MutationOutOfRange, NotSilting, TorsmutError
from torsmut.homext import projective
from torsmut.lattice import enumerate_torsion_classes
from torsmut.reps import Mor, hom_dim
from torsmut.silting import (ChainMap, SiltingObject, TwoTermComplex, algebra_object,
                             homotopy_isomorphic, is_two_term_silting,
                             match_summands, mutate_silting, presilting,
                             shifted_algebra, silting_from_torsion_class,
                             silting_order_geq, sum_complexes,
                             torsion_class_from_silting, two_term_hom,
                             verify_mutation_triangle)
from torsmut.torsion import IndSet


@pytest.fixture(scope="module", params=["a2", "a3", "nakayama:3,2"])
def lattice(request):
    return enumerate_torsion_classes(oracles.ambient(request.param))


@pytest.fixture(scope="module")
def a2_lattice():
    return enumerate_torsion_classes(oracles.ambient("a2"))


def _contractible(alg, v):
    P = projective(alg, v)
    return TwoTermComplex(P, P, P.identity())


def test_silting_objects_valid(lattice):
    L = lattice
    n = L.ambient.algebra.n_vertices
    gs = set()
    for i in range(len(L.classes)):
        sigma = L.silting(i)
        assert len(sigma.summands) == n
        assert is_two_term_silting(sigma)
        assert presilting(sigma.summands)
        assert torsion_class_from_silting(sigma, L.ambient).ids == L.classes[i].ids
        gs.add(tuple(sorted(sigma.g_vectors())))
    assert len(gs) == len(L.classes)


def test_extremes():
    L = enumerate_torsion_classes(oracles.ambient("a3"))
    alg = L.ambient.algebra
    assert L.silting(len(L.classes) - 1).same_as(algebra_object(alg))
    assert L.silting(0).same_as(shifted_algebra(alg))


def test_one_summand_exchange_iff_cover(lattice):
    L = lattice
    n = len(L.classes)
    for i in range(n):
        for j in range(i + 1, n):
            _, lost, gained = match_summands(L.silting(i).summands, L.silting(j).summands)
            one = len(lost) == 1 and len(gained) == 1
            assert one == (L.is_cover(i, j) or L.is_cover(j, i))


def test_order_matches_inclusion(lattice):
    L = lattice
    n = len(L.classes)
    for i in range(n):
        for j in range(n):
            assert silting_order_geq(L.silting(i), L.silting(j)) == L.leq(j, i)


def test_triangles_on_every_cover(lattice):
    L = lattice
    for c in L.covers:
        upper, lower = L.silting(c.upper), L.silting(c.lower)
        rep = verify_mutation_triangle(upper, lower)
        assert rep.ok and rep.direction == "left" and rep.approximation.minimal
        rep = verify_mutation_triangle(lower, upper)
        assert rep.ok and rep.direction == "right"


def test_mutation_round_trip(lattice):
    L = lattice
    for c in L.covers:
        upper, lower = L.silting(c.upper), L.silting(c.lower)
        _, lost, gained = match_summands(upper.summands, lower.summands)
        down = mutate_silting(upper, lost[0], "left", L)
        assert down.same_as(lower)
        back = mutate_silting(down, gained[0], "right", L)
        assert back.same_as(upper)


def test_mutation_out_of_range(a2_lattice):
    L = a2_lattice
    top = L.silting(len(L.classes) - 1)
    with pytest.raises(MutationOutOfRange):
        mutate_silting(top, 0, "right", L)
    with pytest.raises(MutationOutOfRange):
        mutate_silting(L.silting(0), 0, "left", L)
    with pytest.raises(TorsmutError):
        mutate_silting(top, 0, "up", L)
    with pytest.raises(TorsmutError):
        mutate_silting(top, 7, "left", L)


def test_not_silting_rejected(a2_lattice):
    alg = a2_lattice.ambient.algebra
    half = SiltingObject([TwoTermComplex.stalk(alg, "1")])
    assert not is_two_term_silting(half)
    with pytest.raises(NotSilting):
        mutate_silting(half, 0, "left", a2_lattice)


def test_homk_on_stalks():
    alg = builtin_algebra("nakayama:3,2")
    for v in alg.vertices:
        for w in alg.vertices:
            P, Q = TwoTermComplex.stalk(alg, v), TwoTermComplex.stalk(alg, w)
            Ps, Qs = TwoTermComplex.shifted(alg, v), TwoTermComplex.shifted(alg, w)
            h = hom_dim(projective(alg, v), projective(alg, w))
            assert two_term_hom(P, Q).dim == h
            assert two_term_hom(Ps, Qs).dim == h
            assert two_term_hom(Ps, Q, 1).dim == h
            assert two_term_hom(P, Qs, 1).dim == 0
            assert two_term_hom(P, Qs).dim == 0


def test_homk_ignores_contractible_summands():
    ind = oracles.ambient("nakayama:3,2")
    alg = ind.algebra
    cs = [TwoTermComplex.from_presentation(X) for X in ind]
    for X in cs[:4]:
        Xc = sum_complexes([X, _contractible(alg, "1")], alg)
        assert homotopy_isomorphic(X, Xc)
        for Y in cs:
            for shift in (0, 1):
                assert two_term_hom(Xc, Y, shift).dim == two_term_hom(X, Y, shift).dim
                assert two_term_hom(Y, Xc, shift).dim == two_term_hom(Y, X, shift).dim


def test_h0_is_full():
    ind = oracles.ambient("a3")
    cs = [TwoTermComplex.from_presentation(X) for X in ind]
    for X, CX in zip(ind, cs):
        assert CX.h0().dims == X.dims
        for Y, CY in zip(ind, cs):
            assert two_term_hom(CX, CY).dim >= hom_dim(X, Y)


def test_components_and_stalk_part():
    alg = builtin_algebra("a2")
    X = sum_complexes([TwoTermComplex.shifted(alg, "2"), TwoTermComplex.stalk(alg, "1"),
                       _contractible(alg, "2")], alg)
    assert X.stalk_part() == (0, 1)
    parts = X.components()
    assert len(parts) == 2
    assert X.g_vector() == (1, -1)


def test_null_homotopic_maps():
    X = TwoTermComplex.from_presentation(oracles.ambient("a2")[0])
    H = two_term_hom(X, X)
    z = ChainMap(X, X, Mor.zero(X.Pm1, X.Pm1), Mor.zero(X.P0, X.P0))
    assert H.is_null(z) and z.is_chain_map()
    # the identity of a contractible complex is null-homotopic
    C = _contractible(X.algebra, "1")
    ident = ChainMap(C, C, C.Pm1.identity(), C.P0.identity())
    assert two_term_hom(C, C).dim == 0 and two_term_hom(C, C).is_null(ident)


def test_json_shape(a2_lattice):
    data = a2_lattice.silting(2).to_json()
    assert len(data) == 2
    assert all(set(d) == {"Pm1", "P0", "d", "g_vector", "h0_dims"} for d in data)


def test_non_torsion_class_rejected():
    ind = oracles.ambient("a2")
    with pytest.raises(TorsmutError):
        silting_from_torsion_class(IndSet.of(ind, [2]))
