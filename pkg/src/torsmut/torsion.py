"""Torsion-theoretic operations on sets of indecomposables.

Classes are stored as sets of ids into an :class:`IndList`; a module belongs
to the class when all of its indecomposable summands do.  Membership in a
torsion pair is decided by Hom-orthogonality, which is exact whenever the
ambient list holds every indecomposable (or when explicit predicates are
supplied, as for the bounded Kronecker slice).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .errors import NotNested, TorsmutError
from .homext import ext_space
from .indec import IndList
from .reps import (Mor, Rep, _iso_indecomposable, cokernel_of, decompose,
                   hom_dim, hom_space, is_brick, sub_from_bases,
                   submodule_tuples)


@dataclass(frozen=True)
class IndSet:
    """Additive closure of the selected ambient indecomposables.

    ``shift`` tags a class placed in degree -shift (used only for
    bookkeeping of the tilted classes; no complexes are built).
    """

    ambient: IndList = field(compare=False, hash=False, repr=False)
    ids: frozenset
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ids", frozenset(int(i) for i in self.ids))
        bad = [i for i in self.ids if not 0 <= i < len(self.ambient)]
        if bad:
            raise TorsmutError(f"ids {bad} are outside the ambient list")

    @classmethod
    def of(cls, ambient: IndList, ids=()) -> "IndSet":
        return cls(ambient, frozenset(ids))

    @classmethod
    def everything(cls, ambient: IndList) -> "IndSet":
        return cls(ambient, frozenset(range(len(ambient))))

    def sorted(self) -> list[int]:
        return sorted(self.ids)

    def members(self) -> list[Rep]:
        return [self.ambient[i] for i in self.sorted()]

    def __contains__(self, i) -> bool:
        return i in self.ids

    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.sorted())

    def __and__(self, other: "IndSet") -> "IndSet":
        return IndSet(self.ambient, self.ids & other.ids)

    def __or__(self, other: "IndSet") -> "IndSet":
        return IndSet(self.ambient, self.ids | other.ids)

    def __sub__(self, other: "IndSet") -> "IndSet":
        return IndSet(self.ambient, self.ids - other.ids)

    def __le__(self, other: "IndSet") -> bool:
        return self.ids <= other.ids

    def __lt__(self, other: "IndSet") -> bool:
        return self.ids < other.ids

    def shifted(self, k: int = 1) -> "IndSet":
        return IndSet(self.ambient, self.ids, self.shift + k)

    def __repr__(self):
        tag = f"[{-self.shift}]" if self.shift else ""
        return "{" + ",".join(map(str, self.sorted())) + "}" + tag


def in_add(X: Rep, S: IndSet) -> bool:
    """Whether every indecomposable summand of ``X`` is isomorphic to a member of ``S``."""
    if X.total_dim == 0:
        return True
    for Y in decompose(X):
        k = S.ambient.find(Y)
        if k is None or k not in S.ids:
            return False
    return True


# ------------------------------------------------------------ torsion pairs

@dataclass
class TorsionPair:
    t_class: IndSet
    f_class: IndSet
    t_pred: Callable | None = field(default=None, repr=False)
    f_pred: Callable | None = field(default=None, repr=False)

    @property
    def ambient(self) -> IndList:
        return self.t_class.ambient

    def in_t(self, X: Rep) -> bool:
        """Membership of an arbitrary module in the torsion class."""
        if X.total_dim == 0:
            return True
        if self.t_pred is not None:
            return all(self.t_pred(Y) for Y in decompose(X))
        return all(hom_dim(X, F) == 0 for F in self.f_class.members())

    def in_f(self, X: Rep) -> bool:
        if X.total_dim == 0:
            return True
        if self.f_pred is not None:
            return all(self.f_pred(Y) for Y in decompose(X))
        return all(hom_dim(T, X) == 0 for T in self.t_class.members())

    @classmethod
    def from_torsion_class(cls, T: IndSet) -> "TorsionPair":
        return cls(T, perp_torsionfree(T))

    @classmethod
    def from_torsionfree_class(cls, F: IndSet) -> "TorsionPair":
        return cls(perp_torsion(F), F)

    @classmethod
    def from_predicates(cls, ambient: IndList, t_pred, f_pred) -> "TorsionPair":
        t = IndSet.of(ambient, [i for i, X in enumerate(ambient) if t_pred(X)])
        f = IndSet.of(ambient, [i for i, X in enumerate(ambient) if f_pred(X)])
        return cls(t, f, t_pred, f_pred)

    def key(self):
        return (self.t_class.ids, self.f_class.ids)


def perp_torsionfree(T: IndSet) -> IndSet:
    """Ambient indecomposables ``Y`` with Hom(T, Y) = 0."""
    amb = T.ambient
    return IndSet.of(amb, [j for j in range(len(amb)) if all(amb.hom_dim(i, j) == 0 for i in T.ids)])


def perp_torsion(F: IndSet) -> IndSet:
    """Ambient indecomposables ``X`` with Hom(X, F) = 0."""
    amb = F.ambient
    return IndSet.of(amb, [i for i in range(len(amb)) if all(amb.hom_dim(i, j) == 0 for j in F.ids)])


def check_torsion_pair(u: TorsionPair) -> list[str]:
    """Violations of the torsion-pair axioms over the ambient list (empty when valid)."""
    amb = u.ambient
    out = []
    for i in u.t_class:
        for j in u.f_class:
            if amb.hom_dim(i, j):
                out.append(f"Hom({i},{j}) != 0")
    for k, X in enumerate(amb):
        tX, inc = torsion_part(X, u.t_class)
        Q, _ = cokernel_of(inc)
        if not in_add(tX, u.t_class) or not in_add(Q, u.f_class):
            out.append(f"module {k} has no (T, F) filtration")
    return out


# ------------------------------------------------------------ submodules

def quotient_of(X: Rep, rows) -> Rep:
    bases = [r.T.copy() if r.shape[0] else linalg.zeros(d, 0) for r, d in zip(rows, X.dims)]
    _, inc = sub_from_bases(X, bases)
    return cokernel_of(inc)[0]


def submodule_of(X: Rep, rows) -> tuple[Rep, Mor]:
    bases = [r.T.copy() if r.shape[0] else linalg.zeros(d, 0) for r, d in zip(rows, X.dims)]
    return sub_from_bases(X, bases)


def _unit_dims(X: Rep, sign: int):
    for i, d in enumerate(X.dims):
        if d:
            vec = list(X.dims) if sign < 0 else [0] * len(X.dims)
            vec[i] = vec[i] - 1 if sign < 0 else 1
            yield tuple(vec)


def simple_submodules(X: Rep):
    """Row bases of the simple submodules (one-dimensional, killed by all arrows)."""
    for dims in _unit_dims(X, +1):
        yield from submodule_tuples(X, dims)


def maximal_submodules(X: Rep):
    for dims in _unit_dims(X, -1):
        yield from submodule_tuples(X, dims)


def quotient_modules(X: Rep):
    """All quotients of ``X`` (including X and 0)."""
    for rows in submodule_tuples(X):
        yield quotient_of(X, rows)


# ------------------------------------------------------------------ closures

def _filt_cache(ambient) -> dict:
    return ambient.__dict__.setdefault("_filt", {})


def filt_membership(X: Rep, B: IndSet) -> bool:
    """Whether ``X`` has a finite filtration with all factors isomorphic to members of ``B``.

    Filtrations can be refined so that the top factor is indecomposable, so
    it suffices to peel off one member as a quotient and recurse on the kernel.
    """
    if X.total_dim == 0:
        return True
    cache = _filt_cache(B.ambient)
    key = (X.key(), B.ids)
    if key in cache:
        return cache[key]
    result = False
    for b in B.members():
        rest = tuple(x - y for x, y in zip(X.dims, b.dims))
        if min(rest) < 0 or hom_dim(X, b) == 0:
            continue
        for rows in submodule_tuples(X, rest):
            Q = quotient_of(X, rows)
            if _iso_indecomposable(b, Q):
                K, _ = submodule_of(X, rows)
                if filt_membership(K, B):
                    result = True
                    break
        if result:
            break
    cache[key] = result
    return result


def star_membership(E: Rep, X: IndSet, Y: IndSet) -> bool:
    """Whether some submodule ``M`` of ``E`` has ``M`` in add X and ``E/M`` in add Y."""
    for rows in submodule_tuples(E):
        M, inc = submodule_of(E, rows)
        if in_add(M, X) and in_add(cokernel_of(inc)[0], Y):
            return True
    return False


def quotient_closure(X: IndSet) -> IndSet:
    """Indecomposable summands of quotients of the members (a quotient-closed set)."""
    amb = X.ambient
    ids = set()
    for M in X.members():
        for Q in quotient_modules(M):
            if Q.total_dim:
                ids.update(amb.identify(Q))
    return IndSet.of(amb, ids)


def gen_closure(X: IndSet) -> IndSet:
    """Smallest torsion class containing ``X``: Filt of the quotients of its members.

    A quotient of ``X1 + X2`` is an extension of a quotient of ``X2`` by one of
    ``X1``, so quotients of single members suffice; Filt of a quotient-closed
    class is again quotient-closed, hence a torsion class.
    """
    amb = X.ambient
    cache = amb.__dict__.setdefault("_gen", {})
    if X.ids in cache:
        return IndSet.of(amb, cache[X.ids])
    C = quotient_closure(X)
    ids = frozenset(k for k, Y in enumerate(amb) if k in C.ids or filt_membership(Y, C))
    cache[X.ids] = ids
    return IndSet.of(amb, ids)


def sub_closure(X: IndSet) -> IndSet:
    amb = X.ambient
    ids = set()
    for M in X.members():
        for rows in submodule_tuples(M):
            K, _ = submodule_of(M, rows)
            if K.total_dim:
                ids.update(amb.identify(K))
    return IndSet.of(amb, ids)


def cogen_closure(X: IndSet) -> IndSet:
    """Smallest torsion-free class containing ``X``."""
    amb = X.ambient
    C = sub_closure(X)
    return IndSet.of(amb, [k for k, Y in enumerate(amb) if k in C.ids or filt_membership(Y, C)])


def torsion_part(X: Rep, T: IndSet) -> tuple[Rep, Mor]:
    """Trace of ``T`` in ``X``: the sum of the images of all maps from members of ``T``."""
    p = X.p
    cols = [[] for _ in X.dims]
    for M in T.members():
        for f in hom_space(M, X):
            for i, c in enumerate(f.comps):
                if c.size:
                    cols[i].append(c)
    bases = []
    for i, d in enumerate(X.dims):
        if cols[i] and d:
            bases.append(linalg.column_basis(np.hstack(cols[i]), p))
        else:
            bases.append(linalg.zeros(d, 0))
    return sub_from_bases(X, bases)


def cogen_membership(X: Rep, C: Rep) -> bool:
    """Whether ``X`` embeds in a power of ``C`` (the kernels of all maps X -> C meet in zero)."""
    if X.total_dim == 0:
        return True
    for i, d in enumerate(X.dims):
        if d == 0:
            continue
        rows = [f.comps[i] for f in hom_space(X, C) if f.comps[i].size]
        stacked = np.vstack(rows) if rows else linalg.zeros(0, d)
        if linalg.rank(stacked, X.p) < d:
            return False
    return True


# ------------------------------------------------------- almost torsion objects

def _ext_classes_up_to_scalar(Z: Rep, M: Rep):
    sp = ext_space(Z, M)
    for e in sp.classes(nonzero=True):
        first = next(c for c in e.coords if c)
        if first == 1:
            yield sp, e.coords


def is_almost_torsion(M: Rep, u: TorsionPair) -> bool:
    """Torsion-free, nonzero, proper quotients torsion, and extension condition.

    The extension condition asks that for ``0 -> M -> Y -> Z -> 0`` with Y
    torsion-free, Z is torsion-free too.  It is checked for indecomposable
    ``Z`` only: if ``Z = Z1 + Z2`` with ``Z1`` not torsion-free, the pullback
    of the sequence along ``Z1 -> Z`` has middle term a submodule of ``Y``,
    hence torsion-free whenever ``Y`` is, so the indecomposable case already
    produces the violation.  Scalar multiples of a class give isomorphic
    middle terms, so one class per line is enough.
    """
    if M.total_dim == 0 or not u.in_f(M):
        return False
    for rows in simple_submodules(M):
        if sum(r.shape[0] for r in rows) == M.total_dim:
            continue
        if not u.in_t(quotient_of(M, rows)):
            return False
    for Z in u.ambient:
        if u.in_f(Z):
            continue
        for sp, coords in _ext_classes_up_to_scalar(Z, M):
            Y, _, _ = sp.middle_term(coords)
            if u.in_f(Y):
                return False
    return True


def is_almost_torsionfree(N: Rep, t: TorsionPair) -> bool:
    """Dual of :func:`is_almost_torsion`: torsion, proper submodules torsion-free, and for
    ``0 -> Z -> Y -> N -> 0`` with Y torsion, Z is torsion.

    Restricting to indecomposable ``Z`` is justified by pushing out along the
    projection onto a non-torsion summand (a quotient of a torsion module is
    torsion).
    """
    if N.total_dim == 0 or not t.in_t(N):
        return False
    for rows in maximal_submodules(N):
        K, _ = submodule_of(N, rows)
        if K.total_dim and not t.in_f(K):
            return False
    for Z in t.ambient:
        if t.in_t(Z):
            continue
        for sp, coords in _ext_classes_up_to_scalar(N, Z):
            Y, _, _ = sp.middle_term(coords)
            if t.in_t(Y):
                return False
    return True


def almost_torsion_objects(u: TorsionPair) -> IndSet:
    amb = u.ambient
    return IndSet.of(amb, [k for k, M in enumerate(amb) if k in u.f_class.ids and is_almost_torsion(M, u)])


def almost_torsionfree_objects(t: TorsionPair) -> IndSet:
    amb = t.ambient
    return IndSet.of(amb, [k for k, N in enumerate(amb) if k in t.t_class.ids and is_almost_torsionfree(N, t)])


# --------------------------------------------------------------- wideness

@dataclass
class WideVerdict:
    wide: bool
    simples: IndSet
    reason: str = ""


def relative_simples(S: IndSet) -> IndSet:
    """Members with no proper nonzero submodule lying in add S."""
    out = []
    for k in S:
        X = S.ambient[k]
        ok = True
        for rows in submodule_tuples(X):
            d = sum(r.shape[0] for r in rows)
            if d == 0 or d == X.total_dim:
                continue
            K, _ = submodule_of(X, rows)
            if in_add(K, S):
                ok = False
                break
        if ok:
            out.append(k)
    return IndSet.of(S.ambient, out)


def semibrick_wide_check(S: IndSet) -> WideVerdict:
    """Decide whether the extension-closed class add-generated by ``S`` is wide.

    An extension-closed class is wide exactly when it equals Filt of a
    semibrick, and then that semibrick is its set of relative simples.
    Raises :class:`TorsmutError` when ``S`` is not extension-closed in the
    ambient list, since the criterion says nothing in that case.
    """
    amb = S.ambient
    outside = [k for k in range(len(amb)) if k not in S.ids and filt_membership(amb[k], S)]
    if outside:
        raise TorsmutError(f"{S} is not extension-closed: it filters {outside}")
    simples = relative_simples(S)
    for k in simples:
        if not is_brick(amb[k]):
            return WideVerdict(False, simples, f"relative simple {k} is not a brick")
    sl = simples.sorted()
    for i in sl:
        for j in sl:
            if i != j and amb.hom_dim(i, j):
                return WideVerdict(False, simples, f"Hom({i},{j}) != 0 between relative simples")
    for k in S:
        if k not in simples.ids and not filt_membership(amb[k], simples):
            return WideVerdict(False, simples, f"member {k} is not filtered by the relative simples")
    return WideVerdict(True, simples)


# ------------------------------------------------------- filtration triples

@dataclass
class FiltrationTriple:
    u: IndSet
    s: IndSet
    f: IndSet


def triple_from_pairs(u: TorsionPair, t: TorsionPair) -> FiltrationTriple:
    if not u.t_class <= t.t_class:
        raise NotNested("the torsion class of u must lie in that of t")
    return FiltrationTriple(u.t_class, t.t_class & u.f_class, t.f_class)


def pairs_from_triple(tr: FiltrationTriple) -> tuple[TorsionPair, TorsionPair]:
    """``u = (U, S * F)`` and ``t = (U * S, F)``, rebuilt by extension membership."""
    amb = tr.u.ambient
    sf = IndSet.of(amb, [k for k, X in enumerate(amb) if star_membership(X, tr.s, tr.f)])
    us = IndSet.of(amb, [k for k, X in enumerate(amb) if star_membership(X, tr.u, tr.s)])
    return TorsionPair(tr.u, sf), TorsionPair(us, tr.f)


def check_triple(tr: FiltrationTriple) -> list[str]:
    """Hom-vanishing in order (u, s), (u, f), (s, f) and a three-step filtration of every ambient module."""
    amb = tr.u.ambient
    out = []
    for a, b, name in ((tr.u, tr.s, "u,s"), (tr.u, tr.f, "u,f"), (tr.s, tr.f, "s,f")):
        for i in a:
            for j in b:
                if amb.hom_dim(i, j):
                    out.append(f"Hom({i},{j}) != 0 for ({name})")
    t_class = IndSet.of(amb, [k for k, X in enumerate(amb) if star_membership(X, tr.u, tr.s)])
    for k, X in enumerate(amb):
        X1, inc1 = torsion_part(X, tr.u)
        X2, inc2 = torsion_part(X, t_class)
        # X1 sits inside X2 since U lies in T
        inside = all(linalg.rank(np.hstack([b2, b1]), X.p) == b2.shape[1]
                     for b1, b2 in zip(inc1.comps, inc2.comps) if b1.size)
        mid_inc = Mor(X1, X2, tuple(linalg.solve(b2, b1, X.p) if b1.size else linalg.zeros(b2.shape[1], b1.shape[1])
                                    for b1, b2 in zip(inc1.comps, inc2.comps))) if inside else None
        if (not inside or not in_add(X1, tr.u) or not in_add(cokernel_of(mid_inc)[0], tr.s)
                or not in_add(cokernel_of(inc2)[0], tr.f)):
            out.append(f"module {k} has no (u, s, f) filtration")
    return out


def hrs_tilt(u: TorsionPair, t: TorsionPair) -> tuple[IndSet, tuple[IndSet, IndSet]]:
    """Tilted torsion pair ``(T n V, F * U[-1])`` as tagged pieces: ``S`` and ``(F, U[-1])``."""
    if not u.t_class <= t.t_class:
        raise NotNested("the torsion class of u must lie in that of t")
    return t.t_class & u.f_class, (t.f_class, u.t_class.shifted(1))
