"""The lattice of torsion classes: enumeration, covers, brick labels and mutation checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (AmbientIncomplete, CapExceeded, NotACover, NotNested,
                     TorsmutError)
from .indec import IndList
from .reps import is_brick
from .torsion import (IndSet, TorsionPair, almost_torsion_objects,
                      almost_torsionfree_objects, filt_membership,
                      gen_closure, perp_torsionfree, semibrick_wide_check)

LATTICE_CAP = 20


@dataclass
class Cover:
    lower: int
    upper: int
    label: int


@dataclass(eq=False)
class TorsLattice:
    ambient: IndList
    classes: list
    covers: list
    _pairs: dict = field(default_factory=dict, repr=False)
    _silting: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {c.ids: k for k, c in enumerate(self.classes)}

    def index_of(self, T: IndSet) -> int:
        try:
            return self._index[T.ids]
        except KeyError:
            raise TorsmutError(f"{T} is not a torsion class of this lattice") from None

    def leq(self, i: int, j: int) -> bool:
        return self.classes[i] <= self.classes[j]

    def pair(self, i: int) -> TorsionPair:
        if i not in self._pairs:
            self._pairs[i] = TorsionPair.from_torsion_class(self.classes[i])
        return self._pairs[i]

    def silting(self, i: int):
        from .silting import silting_from_torsion_class

        if i not in self._silting:
            self._silting[i] = silting_from_torsion_class(self.classes[i])
        return self._silting[i]

    def nested_pairs(self, strict: bool = True) -> list[tuple[int, int]]:
        n = len(self.classes)
        return [(i, j) for i in range(n) for j in range(n)
                if (i != j or not strict) and self.leq(i, j)]

    def is_cover(self, i: int, j: int) -> bool:
        return any(c.lower == i and c.upper == j for c in self.covers)

    def join(self, i: int, j: int) -> int:
        return self.index_of(gen_closure(self.classes[i] | self.classes[j]))

    def meet(self, i: int, j: int) -> int:
        return self.index_of(self.classes[i] & self.classes[j])

    def labels_above(self, i: int) -> set[int]:
        return {c.label for c in self.covers if c.lower == i}

    def labels_below(self, j: int) -> set[int]:
        return {c.label for c in self.covers if c.upper == j}

    def to_dot(self) -> str:
        lines = ["digraph tors {", "  rankdir=BT;"]
        for k, c in enumerate(self.classes):
            lines.append(f'  c{k} [label="{{{",".join(map(str, c.sorted()))}}}"];')
        for cv in self.covers:
            dims = ",".join(map(str, self.ambient[cv.label].dims))
            lines.append(f'  c{cv.lower} -> c{cv.upper} [label="({dims})"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "ambient": [X.to_json() for X in self.ambient],
            "classes": [c.sorted() for c in self.classes],
            "order": [[i, j] for i, j in self.nested_pairs(strict=False)],
            "covers": [{"lower": c.lower, "upper": c.upper, "label": c.label,
                        "label_dims": list(self.ambient[c.label].dims)} for c in self.covers],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _class_key(c: IndSet):
    return (len(c), c.sorted())


def enumerate_torsion_classes(ind: IndList, cap: int = LATTICE_CAP) -> TorsLattice:
    """All torsion classes, found by adding one indecomposable at a time to known classes.

    Every torsion class is the closure of its members, and each such closure
    is reached by a chain ``0, gen(x1), gen(x1, x2), ...``, so the search from
    the zero class finds all of them.
    """
    if not ind.complete:
        raise AmbientIncomplete("torsion classes need a certified complete list of indecomposables")
    if len(ind) > cap:
        raise CapExceeded(f"{len(ind)} indecomposables exceed the lattice cap {cap}")
    seen = {frozenset()}
    frontier = [IndSet.of(ind)]
    while frontier:
        nxt = []
        for C in frontier:
            for x in range(len(ind)):
                if x in C.ids:
                    continue
                D = gen_closure(IndSet.of(ind, C.ids | {x}))
                if D.ids not in seen:
                    seen.add(D.ids)
                    nxt.append(D)
        frontier = nxt
    classes = sorted((IndSet.of(ind, s) for s in seen), key=_class_key)
    lat = TorsLattice(ind, classes, [])
    n = len(classes)
    for i in range(n):
        for j in range(n):
            if i != j and classes[i] < classes[j] and not any(
                    classes[i] < classes[k] < classes[j] for k in range(n)):
                lat.covers.append(Cover(i, j, -1))
    for cv in lat.covers:
        cv.label = brick_label(classes[cv.lower], classes[cv.upper], lat)
    return lat


def enumerate_torsion_classes_oracle(ind: IndList) -> set[frozenset]:
    """Independent check: ``T = left perp of (right perp of X)`` over all subsets X."""
    n = len(ind)
    out = set()
    for r in range(n + 1):
        for xs in combinations(range(n), r):
            F = [j for j in range(n) if all(ind.hom_dim(i, j) == 0 for i in xs)]
            out.add(frozenset(i for i in range(n) if all(ind.hom_dim(i, j) == 0 for j in F)))
    return out


def brick_label(lower: IndSet, upper: IndSet, L: TorsLattice) -> int:
    """The brick ``M`` with ``upper n lower-perp = Filt(M)`` for a cover ``lower < upper``."""
    i, j = L.index_of(lower), L.index_of(upper)
    if not (lower < upper) or any(lower < c < upper for c in L.classes):
        raise NotACover(f"{lower} < {upper} is not a cover")
    S = upper & perp_torsionfree(lower)
    verdict = semibrick_wide_check(S)
    if not verdict.wide or len(verdict.simples) != 1:
        raise TorsmutError(f"cover {i} -> {j} has no single brick label ({verdict.reason})")
    (k,) = verdict.simples.sorted()
    if not is_brick(L.ambient[k]):
        raise TorsmutError(f"label {k} is not a brick")
    return k


# ------------------------------------------------------------ mutation checks

@dataclass
class MutationVerdict:
    is_mutation: bool
    s_set: IndSet
    semibrick: IndSet
    is_irreducible: bool
    cross_check: bool | None = None
    reason: str = ""


def check_mutation(u: TorsionPair, t: TorsionPair, cross_check: bool = True) -> MutationVerdict:
    """Whether ``t`` is a mutation of ``u``: the interval class ``T n V`` is wide.

    With ``cross_check`` the semibrick is compared with the almost torsion
    objects of ``u`` lying in ``T`` and the almost torsion-free objects of
    ``t`` lying in ``V``.
    """
    if not u.t_class <= t.t_class:
        raise NotNested("the torsion class of u must lie in that of t")
    S = t.t_class & u.f_class
    w = semibrick_wide_check(S)
    cc = None
    if w.wide and cross_check:
        at = almost_torsion_objects(u) & t.t_class
        atf = almost_torsionfree_objects(t) & u.f_class
        cc = at.ids == w.simples.ids == atf.ids
    return MutationVerdict(w.wide, S, w.simples, w.wide and len(w.simples) == 1, cc, w.reason)


@dataclass
class IntervalEnds:
    ends: list
    unique: bool

    @property
    def value(self) -> IndSet:
        if not self.unique:
            raise TorsmutError("the extremal mutation is not unique")
        return self.ends[0]


def mutation_interval_top(u: TorsionPair, L: TorsLattice) -> IntervalEnds:
    """Largest torsion classes ``T`` above ``u`` with ``[U, T]`` a wide interval."""
    cands = [c for c in L.classes if u.t_class <= c
             and check_mutation(u, TorsionPair.from_torsion_class(c), cross_check=False).is_mutation]
    tops = [c for c in cands if not any(c < d for d in cands)]
    return IntervalEnds(tops, len(tops) == 1)


def mutation_interval_bottom(t: TorsionPair, L: TorsLattice) -> IntervalEnds:
    """Smallest torsion classes ``U`` below ``t`` with ``[U, T]`` a wide interval."""
    cands = [c for c in L.classes if c <= t.t_class
             and check_mutation(TorsionPair.from_torsion_class(c), t, cross_check=False).is_mutation]
    bottoms = [c for c in cands if not any(d < c for d in cands)]
    return IntervalEnds(bottoms, len(bottoms) == 1)


@dataclass
class RightMutation:
    subset: IndSet
    t_class: IndSet
    verified: bool


def right_mutations_of(u: TorsionPair, L: TorsLattice) -> list[RightMutation]:
    """One right mutation per subset of the almost torsion objects of ``u``."""
    amb = L.ambient
    M = almost_torsion_objects(u).sorted()
    out = []
    for r in range(len(M) + 1):
        for sub in combinations(M, r):
            T = gen_closure(IndSet.of(amb, u.t_class.ids | set(sub)))
            v = check_mutation(u, TorsionPair.from_torsion_class(T), cross_check=False)
            out.append(RightMutation(IndSet.of(amb, sub), T, v.is_mutation and v.semibrick.ids == set(sub)))
    if len({m.t_class.ids for m in out}) != len(out):
        raise TorsmutError("distinct subsets produced the same torsion class")
    return out


# ------------------------------------------------------------ Theorem C check

@dataclass
class TheoremCReport:
    nested_pairs: int
    covers: int
    violations: list

    def summary(self) -> str:
        return f"{self.nested_pairs} nested pairs, {self.covers} covers, {len(self.violations)} violations"


def _single_brick(u: TorsionPair, t: TorsionPair) -> bool:
    """The interval is Filt of one brick, found among the almost torsion objects of ``u``."""
    amb = u.ambient
    cand = (almost_torsion_objects(u) & t.t_class).sorted()
    if len(cand) != 1 or not is_brick(amb[cand[0]]):
        return False
    M = IndSet.of(amb, cand)
    S = t.t_class & u.f_class
    return all(filt_membership(amb[k], M) for k in S)


def verify_theorem_c(L: TorsLattice, with_silting: bool = True) -> TheoremCReport:
    """For each strict inclusion ``U < T``: cover, irreducible mutation, a single summand
    exchanged between the silting objects, and a single-brick interval must agree.
    """
    from .silting import match_summands

    pairs = L.nested_pairs(strict=True)
    violations = []
    for i, j in pairs:
        u, t = L.pair(i), L.pair(j)
        cover = L.is_cover(i, j)
        irreducible = check_mutation(u, t, cross_check=False).is_irreducible
        brick = _single_brick(u, t)
        flags = [cover, irreducible, brick]
        if with_silting:
            _, lost, gained = match_summands(L.silting(i).summands, L.silting(j).summands)
            flags.append(len(lost) == 1 and len(gained) == 1)
        if len(set(flags)) != 1:
            violations.append({"lower": i, "upper": j, "cover": cover, "irreducible": irreducible,
                               "single_brick": brick, "one_summand": flags[3] if with_silting else None})
    return TheoremCReport(len(pairs), len(L.covers), violations)
