"""Enumeration of indecomposable modules up to isomorphism.

Every non-simple indecomposable ``E`` has a simple submodule ``S``; writing
``E / S = Q_1 + ... + Q_r`` with ``Q_i`` indecomposable, the class of
``0 -> S -> E -> E/S -> 0`` has a nonzero component in each ``Ext^1(Q_i, S)``
(a zero component would split ``Q_i`` off ``E``), and the components over the
copies of one ``Q_i`` are linearly independent (otherwise a change of basis
of those copies produces a zero component).  So ``E`` is the middle term of an
extension of a known, strictly smaller module by a simple, drawn from a finite
list: that is the knitting step below.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraFamily, builtin_algebra, standard_module
from .errors import AmbientIncomplete, BoundExceeded, TorsmutError
from .homext import ext_space, sum_of_extensions
from .reps import (Rep, _iso_indecomposable, decompose, hom_dim,
                   is_indecomposable)

log = logging.getLogger(__name__)

DEFAULT_BOUND = 7


@dataclass(eq=False)
class IndList:
    """Indecomposables in canonical order; ``complete`` certifies that nothing is missing."""

    algebra: object
    items: list
    complete: bool
    bound: int | None = None
    _hom: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)

    def hom_dim(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._hom:
            self._hom[key] = hom_dim(self.items[i], self.items[j])
        return self._hom[key]

    def find(self, X: Rep) -> int | None:
        """Id of the item isomorphic to the indecomposable ``X``, if any."""
        for k, Y in enumerate(self.items):
            if Y.dims == X.dims and _iso_indecomposable(Y, X):
                return k
        return None

    def identify(self, X: Rep) -> list[int]:
        """Sorted ids of the indecomposable summands of ``X`` (with multiplicity)."""
        ids = []
        for Y in decompose(X):
            k = self.find(Y)
            if k is None:
                raise AmbientIncomplete(f"summand with dimension vector {Y.dims} is not in the ambient list")
            ids.append(k)
        return sorted(ids)

    def try_identify(self, X: Rep) -> list[int | None]:
        return sorted((self.find(Y) for Y in decompose(X)), key=lambda k: (k is None, k or 0))


def _canonical(items: list[Rep]) -> list[Rep]:
    return sorted(items, key=Rep.sort_key)


def _multisets(cands: list[tuple[Rep, int]], target: int | None, min_total: int = 0):
    """Multisets over ``cands`` (module, max multiplicity).

    With ``target`` set, only multisets of exactly that total dimension; with
    ``target=None`` every nonempty multiset of total dimension >= ``min_total``.
    Yields lists of ``(index, multiplicity)``.
    """
    n = len(cands)

    def rec(k, remaining, acc, total):
        if k == n:
            if acc and (remaining == 0 if target is not None else total >= min_total):
                yield list(acc)
            return
        X, cap = cands[k]
        d = X.total_dim
        for m in range(cap + 1):
            if target is not None and m * d > remaining:
                break
            if m:
                acc.append((k, m))
            yield from rec(k + 1, remaining - m * d if target is not None else 0, acc, total + m * d)
            if m:
                acc.pop()

    yield from rec(0, target if target is not None else 0, [], 0)


def _component_choices(dim: int, mult: int, p: int):
    """Linearly independent ``mult``-tuples in F_p^dim, one per spanned subspace."""
    for m in linalg.subspace_rrefs(dim, mult, p):
        yield m


def knit_candidates(S: Rep, parts: list[tuple[Rep, int]]):
    """Middle terms of the extensions of ``(+) Q_i^{m_i}`` by ``S`` with independent nonzero components."""
    spaces = [ext_space(Q, S) for Q, _ in parts]

    def rec(k, seqs):
        if k == len(parts):
            yield sum_of_extensions(seqs)[0]
            return
        sp, m = spaces[k], parts[k][1]
        for rows in _component_choices(sp.dim, m, S.p):
            yield from rec(k + 1, seqs + [sp.middle_term(r) for r in rows])

    yield from rec(0, [])


def enumerate_indecomposables(algebra, dim_bound: int = DEFAULT_BOUND, strict: bool = False,
                              certify: bool = True) -> IndList:
    """All indecomposables of total dimension <= ``dim_bound``.

    ``complete`` is set when every extension of a found module by a simple
    (with no size limit) yields nothing new, which proves the list is all of
    ind A.  With ``strict=True`` a non-certified result raises
    :class:`BoundExceeded` instead of being returned as a bounded slice.
    """
    if dim_bound < 1:
        raise TorsmutError("dimension bound must be >= 1")
    simples = [standard_module(algebra, "simple", v) for v in algebra.vertices]
    found: list[Rep] = list(simples)

    def is_new(E: Rep) -> bool:
        return not any(F.dims == E.dims and _iso_indecomposable(F, E) for F in found)

    def candidates(S: Rep):
        out = []
        for Q in found:
            d = ext_space(Q, S).dim
            if d:
                out.append((Q, d))
        return out

    for m in range(2, dim_bound + 1):
        new = []
        for S in simples:
            cands = candidates(S)
            for ms in _multisets(cands, m - 1):
                parts = [(cands[k][0], mult) for k, mult in ms]
                for E in knit_candidates(S, parts):
                    if is_indecomposable(E) and is_new(E) and not any(
                            N.dims == E.dims and _iso_indecomposable(N, E) for N in new):
                        new.append(E)
        found.extend(new)
        log.debug("dimension %d: %d new indecomposables", m, len(new))

    complete = False
    if certify:
        complete = _certify(simples, found, candidates, dim_bound)
    if strict and not complete:
        raise BoundExceeded(f"indecomposables beyond total dimension {dim_bound} exist or could not be excluded")
    return IndList(algebra, _canonical(found), complete, dim_bound)


def _certify(simples, found, candidates, bound) -> bool:
    """Extension pass without size limit: True iff it adds no indecomposable.

    Multiplicities are capped by Ext dimensions, so the pass is finite; it
    runs by increasing size and stops at the first new module.
    """
    cands = {id(S): candidates(S) for S in simples}
    top = max((sum(Q.total_dim * d for Q, d in c) for c in cands.values()), default=0)
    for total in range(bound, top + 1):
        for S in simples:
            c = cands[id(S)]
            for ms in _multisets(c, total):
                parts = [(c[k][0], mult) for k, mult in ms]
                try:
                    for E in knit_candidates(S, parts):
                        if is_indecomposable(E) and not any(
                                F.dims == E.dims and _iso_indecomposable(F, E) for F in found):
                            return False
                except TorsmutError:
                    return False
    return True


# ------------------------------------------------------------ closed forms

def interval_module(algebra, path_arrows: list[str], start: str) -> Rep:
    """Uniserial module along a path: one basis vector per vertex visited, arrows act by identity."""
    alg = algebra
    visits = [start]
    for a in path_arrows:
        visits.append(alg.arrow_by_name[a].target)
    dims = [0] * alg.n_vertices
    pos = []
    for v in visits:
        i = alg.vertex_index[v]
        pos.append((i, dims[i]))
        dims[i] += 1
    mats = {a.name: linalg.zeros(dims[alg.vertex_index[a.target]], dims[alg.vertex_index[a.source]]) for a in alg.arrows}
    for k, a in enumerate(path_arrows):
        (_, r), (_, c) = pos[k], pos[k + 1]
        mats[a][c, r] = 1
    return Rep(alg, tuple(dims), mats)


def closed_form_indecomposables(family: AlgebraFamily | str, p: int = linalg.DEFAULT_P) -> IndList:
    """Interval modules of a linearly oriented A_n or a cyclic Nakayama algebra.

    Both algebras are Nakayama, so every indecomposable is uniserial, hence a
    quotient ``P(v) / rad^k P(v)``: one module per nonzero path (its top at
    the start, its socle at the end).
    """
    if isinstance(family, str):
        family = AlgebraFamily.parse(family)
    if family.tag not in ("linear_an", "cyclic_nakayama", "point"):
        raise TorsmutError(f"no closed form for family {family.tag}")
    alg = builtin_algebra(family, p)
    items = [interval_module(alg, list(q.arrows), q.source) for q in alg.path_basis]
    return IndList(alg, _canonical(items), True, None)


def kronecker_preprojective(algebra, k: int) -> Rep:
    """``P_k`` with dimension vector ``(k, k+1)``: ``a = [I; 0]``, ``b = [0; I]``."""
    a = np.vstack([linalg.identity(k), linalg.zeros(1, k)])
    b = np.vstack([linalg.zeros(1, k), linalg.identity(k)])
    return Rep(algebra, (k, k + 1), {"a": a, "b": b})


def kronecker_preinjective(algebra, k: int) -> Rep:
    """``I_k`` with dimension vector ``(k+1, k)``: ``a = [I 0]``, ``b = [0 I]``."""
    a = np.hstack([linalg.identity(k), linalg.zeros(k, 1)])
    b = np.hstack([linalg.zeros(k, 1), linalg.identity(k)])
    return Rep(algebra, (k + 1, k), {"a": a, "b": b})
