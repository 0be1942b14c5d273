import json

import pytest

import oracles
from torsmut.errors import (AmbientIncomplete, CapExceeded, NotACover,
                            NotNested, TorsmutError)
from torsmut.indec import enumerate_indecomposables
from torsmut.algebra import builtin_algebra
from torsmut.lattice import (brick_label, check_mutation,
                             enumerate_torsion_classes,
                             enumerate_torsion_classes_oracle,
                             mutation_interval_bottom, mutation_interval_top,
                             right_mutations_of, verify_theorem_c)
from torsmut.reps import is_isomorphic
from torsmut.torsion import (IndSet, TorsionPair, almost_torsion_objects,
                             almost_torsionfree_objects, gen_closure)


@pytest.fixture(scope="module", params=["a2", "a3", "nakayama:3,2"])
def lattice(request):
    return enumerate_torsion_classes(oracles.ambient(request.param))


@pytest.fixture(scope="module")
def a2_lattice():
    return enumerate_torsion_classes(oracles.ambient("a2"))


def test_a2_pentagon(a2_lattice):
    L = a2_lattice
    assert [c.sorted() for c in L.classes] == [[], [0], [1], [1, 2], [0, 1, 2]]
    edges = sorted((c.lower, c.upper, L.ambient[c.label].dims) for c in L.covers)
    assert edges == [(0, 1, (0, 1)), (0, 2, (1, 0)), (1, 4, (1, 0)), (2, 3, (1, 1)), (3, 4, (0, 1))]


@pytest.mark.parametrize("name,count", [("point", 2), ("a2", 5), ("a3", 14), ("nakayama:3,2", 14)])
def test_class_counts_match_oracle(name, count):
    ind = oracles.ambient(name)
    L = enumerate_torsion_classes(ind)
    assert len(L.classes) == count
    assert {c.ids for c in L.classes} == enumerate_torsion_classes_oracle(ind)


def test_lattice_operations(lattice):
    L = lattice
    n = len(L.classes)
    for i in range(n):
        assert gen_closure(L.classes[i]).ids == L.classes[i].ids
        for j in range(n):
            m, k = L.meet(i, j), L.join(i, j)
            assert L.leq(m, i) and L.leq(m, j) and L.leq(i, k) and L.leq(j, k)
            # greatest lower bound and least upper bound
            for c in range(n):
                if L.leq(c, i) and L.leq(c, j):
                    assert L.leq(c, m)
                if L.leq(i, c) and L.leq(j, c):
                    assert L.leq(k, c)


def test_covers_and_labels(lattice):
    L = lattice
    n = len(L.classes)
    covers = {(c.lower, c.upper) for c in L.covers}
    for i in range(n):
        for j in range(n):
            strict = i != j and L.leq(i, j)
            between = any(k not in (i, j) and L.leq(i, k) and L.leq(k, j) for k in range(n))
            assert ((i, j) in covers) == (strict and not between)
    for c in L.covers:
        assert brick_label(L.classes[c.lower], L.classes[c.upper], L) == c.label


def test_labels_at_a_vertex_distinct(lattice):
    L = lattice
    amb = L.ambient
    for i in range(len(L.classes)):
        for group in (L.labels_above(i), L.labels_below(i)):
            ids = sorted(group)
            for a in range(len(ids)):
                for b in range(a + 1, len(ids)):
                    assert not is_isomorphic(amb[ids[a]], amb[ids[b]])
        assert len(L.labels_above(i)) == sum(1 for c in L.covers if c.lower == i)


def test_almost_torsion_equals_labels(lattice):
    L = lattice
    for i in range(len(L.classes)):
        u = L.pair(i)
        assert almost_torsion_objects(u).ids == L.labels_above(i)
        assert almost_torsionfree_objects(u).ids == L.labels_below(i)


def test_theorem_c(lattice):
    rep = verify_theorem_c(lattice)
    assert rep.violations == []
    assert rep.covers == len(lattice.covers)


def test_a2_theorem_c_counts(a2_lattice):
    rep = verify_theorem_c(a2_lattice)
    assert rep.summary() == "8 nested pairs, 5 covers, 0 violations"


def test_mutation_verdicts(a2_lattice):
    L = a2_lattice
    bottom, top = L.pair(0), L.pair(4)
    v = check_mutation(bottom, top)
    assert v.is_mutation and not v.is_irreducible
    assert v.semibrick.ids == {0, 1} and v.cross_check
    v = check_mutation(L.pair(0), L.pair(3))
    assert not v.is_mutation
    v = check_mutation(L.pair(2), L.pair(3))
    assert v.is_irreducible and v.semibrick.ids == {2} and v.cross_check
    with pytest.raises(NotNested):
        check_mutation(L.pair(3), L.pair(2))


def test_interval_ends(a2_lattice):
    L = a2_lattice
    top = mutation_interval_top(L.pair(0), L)
    assert top.unique and top.value.ids == L.classes[4].ids
    top = mutation_interval_top(L.pair(2), L)
    assert top.unique and top.value.ids == L.classes[3].ids
    bottom = mutation_interval_bottom(L.pair(4), L)
    assert bottom.unique and bottom.value.ids == frozenset()


def test_right_mutations_biject_with_subsets(lattice):
    L = lattice
    for i in range(len(L.classes)):
        u = L.pair(i)
        muts = right_mutations_of(u, L)
        assert len(muts) == 2 ** len(almost_torsion_objects(u))
        assert all(m.verified for m in muts)


def test_brick_label_rejects_non_cover(a2_lattice):
    L = a2_lattice
    with pytest.raises(NotACover):
        brick_label(L.classes[0], L.classes[4], L)


def test_exports(a2_lattice):
    L = a2_lattice
    dot = L.to_dot()
    assert dot.startswith("digraph tors {")
    assert dot.count("->") == 5 and dot.count("label=") == 10
    data = json.loads(L.dumps())
    assert len(data["classes"]) == 5 and len(data["covers"]) == 5
    assert [1, 1] in [c["label_dims"] for c in data["covers"]]


def test_incomplete_ambient_rejected():
    ind = enumerate_indecomposables(builtin_algebra("kronecker"), 3)
    with pytest.raises(AmbientIncomplete):
        enumerate_torsion_classes(ind)


def test_lattice_cap():
    with pytest.raises(CapExceeded):
        enumerate_torsion_classes(oracles.ambient("a3"), cap=4)


def test_index_of_unknown(a2_lattice):
    with pytest.raises(TorsmutError):
        a2_lattice.index_of(IndSet.of(a2_lattice.ambient, [2]))


def test_predicate_pairs():
    ind = oracles.ambient("a2")
    u = TorsionPair.from_predicates(ind, lambda X: X.dims == (0, 1), lambda X: X.dims[1] == 0)
    assert u.t_class.ids == {0} and u.f_class.ids == {1}
