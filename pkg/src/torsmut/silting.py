"""Two-term complexes of projectives, their homotopy category, and silting mutation.

A two-term complex ``P^-1 --d--> P^0`` is, up to homotopy, the sum of the
minimal projective presentation of ``H^0 = coker d`` and a stalk ``P'' -> 0``.
That gives the isomorphism test used throughout: compare ``H^0`` and the
multiplicities of ``P''``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import linalg
from .errors import (CapExceeded, MutationOutOfRange, NotSilting,
                     TorsmutError)
from .homext import (ext_dim, factor_through_epi, factor_through_mono,
                     minimal_projective_presentation, projective)
from .reps import (Mor, Rep, cokernel_of, decompose, direct_sum, hom_space,
                   is_isomorphic, kernel_of, mor_coords, radical_top)

END_ENUM_CAP = 2**12


def top_dims(X: Rep) -> tuple[int, ...]:
    return radical_top(X)[1][0].dims


def mor_sum(maps: list[Mor], source: Rep, target: Rep) -> Mor:
    """Block-diagonal map between direct sums."""
    comps = []
    for i in range(source.algebra.n_vertices):
        m = linalg.zeros(target.dims[i], source.dims[i])
        r = c = 0
        for f in maps:
            blk = f.comps[i]
            m[r:r + blk.shape[0], c:c + blk.shape[1]] = blk
            r += blk.shape[0]
            c += blk.shape[1]
        comps.append(m)
    return Mor(source, target, tuple(comps))


def _stack_rows(maps: list[Mor], source: Rep, target: Rep) -> Mor:
    return Mor(source, target, tuple(np.vstack([f.comps[i] for f in maps]) if maps else linalg.zeros(target.dims[i], source.dims[i])
                                     for i in range(source.algebra.n_vertices)))


def _stack_cols(maps: list[Mor], source: Rep, target: Rep) -> Mor:
    return Mor(source, target, tuple(np.hstack([f.comps[i] for f in maps]) if maps else linalg.zeros(target.dims[i], source.dims[i])
                                     for i in range(source.algebra.n_vertices)))


def _sum_rep(reps: list[Rep], algebra) -> Rep:
    return direct_sum(*reps) if reps else Rep.zero(algebra)


@dataclass(eq=False)
class TwoTermComplex:
    """``Pm1 --d--> P0`` in degrees -1 and 0, both projective."""

    Pm1: Rep
    P0: Rep
    d: Mor

    @property
    def algebra(self):
        return self.P0.algebra

    @classmethod
    def from_presentation(cls, X: Rep) -> "TwoTermComplex":
        pres = minimal_projective_presentation(X)
        return cls(pres.P1, pres.P0, pres.d)

    @classmethod
    def stalk(cls, algebra, v: str) -> "TwoTermComplex":
        """``0 -> P(v)``."""
        P = projective(algebra, v)
        Z = Rep.zero(algebra)
        return cls(Z, P, Mor.zero(Z, P))

    @classmethod
    def shifted(cls, algebra, v: str) -> "TwoTermComplex":
        """``P(v) -> 0``."""
        P = projective(algebra, v)
        Z = Rep.zero(algebra)
        return cls(P, Z, Mor.zero(P, Z))

    def h0(self) -> Rep:
        return cokernel_of(self.d)[0]

    def mult_m1(self) -> tuple[int, ...]:
        return top_dims(self.Pm1)

    def mult_0(self) -> tuple[int, ...]:
        return top_dims(self.P0)

    def g_vector(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.mult_0(), self.mult_m1()))

    def stalk_part(self) -> tuple[int, ...]:
        """Multiplicities of ``P''`` in the decomposition ``minpres(H^0) + (P'' -> 0) + contractible``."""
        H = self.h0()
        pres = minimal_projective_presentation(H)
        alg = self.algebra
        top_h = top_dims(H)
        p1 = [sum(1 for v in pres.p1_vertices if v == w) for w in alg.vertices]
        contract = [a - b for a, b in zip(self.mult_0(), top_h)]
        pp = tuple(a - b - c for a, b, c in zip(self.mult_m1(), p1, contract))
        if min(pp) < 0 or min(contract) < 0:
            raise TorsmutError("inconsistent two-term complex multiplicities")
        return pp

    def components(self) -> list["TwoTermComplex"]:
        """Indecomposable summands in the homotopy category, as reduced complexes."""
        alg = self.algebra
        out = [TwoTermComplex.from_presentation(M) for M in decompose(self.h0())]
        for v, k in zip(alg.vertices, self.stalk_part()):
            out.extend(TwoTermComplex.shifted(alg, v) for _ in range(k))
        return out

    def is_indecomposable(self) -> bool:
        return len(self.components()) == 1

    def describe(self) -> dict:
        alg = self.algebra
        return {
            "Pm1": {v: k for v, k in zip(alg.vertices, self.mult_m1()) if k},
            "P0": {v: k for v, k in zip(alg.vertices, self.mult_0()) if k},
            "d": {v: c.tolist() for v, c in zip(alg.vertices, self.d.comps) if c.size},
            "g_vector": list(self.g_vector()),
            "h0_dims": list(self.h0().dims),
        }

    def sort_key(self):
        return (tuple(-g for g in self.g_vector()), self.h0().dims)

    def __repr__(self):
        return f"TwoTermComplex(g={self.g_vector()}, H0={self.h0().dims})"


def sum_complexes(cs: list[TwoTermComplex], algebra) -> TwoTermComplex:
    Pm1 = _sum_rep([c.Pm1 for c in cs], algebra)
    P0 = _sum_rep([c.P0 for c in cs], algebra)
    return TwoTermComplex(Pm1, P0, mor_sum([c.d for c in cs], Pm1, P0))


def homotopy_isomorphic(X: TwoTermComplex, Y: TwoTermComplex) -> bool:
    return X.stalk_part() == Y.stalk_part() and is_isomorphic(X.h0(), Y.h0())


def match_summands(xs: list[TwoTermComplex], ys: list[TwoTermComplex]):
    """Pair up summands isomorphic in the homotopy category.

    Returns ``(shared pairs, unmatched xs, unmatched ys)`` as index lists.
    """
    left = list(range(len(ys)))
    pairs, lost = [], []
    for i, x in enumerate(xs):
        for k in left:
            if homotopy_isomorphic(x, ys[k]):
                pairs.append((i, k))
                left.remove(k)
                break
        else:
            lost.append(i)
    return pairs, lost, left


# ------------------------------------------------------------ homotopy Hom

@dataclass
class ChainMap:
    source: TwoTermComplex
    target: TwoTermComplex
    f1: Mor
    f0: Mor

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target, self.f1 @ other.f1, self.f0 @ other.f0)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, self.f1 + other.f1, self.f0 + other.f0)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, self.f1.scale(c), self.f0.scale(c))

    def is_chain_map(self) -> bool:
        return np.array_equal((self.f0 @ self.source.d).flat(), (self.target.d @ self.f1).flat())

    def is_iso_of_complexes(self) -> bool:
        return self.f1.is_iso() and self.f0.is_iso()


class HomK:
    """Hom in the homotopy category between two-term complexes.

    ``shift=0``: chain maps modulo maps ``h d_X + d_Y h`` with ``h : X^0 -> Y^-1``.
    ``shift=1``: maps ``X^-1 -> Y^0`` modulo ``g d_X + d_Y k`` with
    ``g : X^0 -> Y^0`` and ``k : X^-1 -> Y^-1``.
    """

    def __init__(self, X: TwoTermComplex, Y: TwoTermComplex, shift: int = 0):
        if shift not in (0, 1):
            raise ValueError("shift must be 0 or 1")
        self.X, self.Y, self.shift = X, Y, shift
        p = X.algebra.p
        self.p = p
        if shift == 0:
            self.B1 = hom_space(X.Pm1, Y.Pm1)
            self.B0 = hom_space(X.P0, Y.P0)
            n1, n0 = len(self.B1), len(self.B0)
            cols = [(Y.d @ f).scale(p - 1).flat() for f in self.B1] + [(g @ X.d).flat() for g in self.B0]
            width = n1 + n0
            size = sum(a * b for a, b in zip(X.Pm1.dims, Y.P0.dims))
            m = np.stack(cols, axis=1) if cols else linalg.zeros(size, 0)
            chains = linalg.kernel_basis(m.reshape(size, width), p) if width else linalg.zeros(0, 0)
            homs = []
            for h in hom_space(X.P0, Y.Pm1):
                homs.append(np.concatenate([mor_coords(h @ X.d, self.B1), mor_coords(Y.d @ h, self.B0)]).astype(np.int64))
            whole = chains.T.copy() if width else linalg.zeros(0, 0)
            sub = np.array(homs).reshape(len(homs), width) if homs else linalg.zeros(0, width)
        else:
            self.B = hom_space(X.Pm1, Y.P0)
            width = len(self.B)
            whole = linalg.identity(width)
            gens = [g @ X.d for g in hom_space(X.P0, Y.P0)] + [Y.d @ k for k in hom_space(X.Pm1, Y.Pm1)]
            sub = np.array([mor_coords(f, self.B) for f in gens]).reshape(len(gens), width) if gens else linalg.zeros(0, width)
        self.width = width
        self.quotient = linalg.QuotientSpace(whole, sub, p)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def _chain(self, vec) -> ChainMap:
        n1 = len(self.B1)
        f1 = Mor.zero(self.X.Pm1, self.Y.Pm1)
        for c, b in zip(vec[:n1], self.B1):
            if c:
                f1 = f1 + b.scale(int(c))
        f0 = Mor.zero(self.X.P0, self.Y.P0)
        for c, b in zip(vec[n1:], self.B0):
            if c:
                f0 = f0 + b.scale(int(c))
        return ChainMap(self.X, self.Y, f1, f0)

    def basis(self) -> list[ChainMap]:
        if self.shift != 0:
            raise TorsmutError("chain-map representatives only for shift 0")
        return [self._chain(self.quotient.lift(row)) for row in linalg.identity(self.dim)]

    def coords(self, f: ChainMap) -> np.ndarray:
        vec = np.concatenate([mor_coords(f.f1, self.B1), mor_coords(f.f0, self.B0)]).astype(np.int64)
        return self.quotient.coords(vec)

    def is_null(self, f: ChainMap) -> bool:
        return not np.any(self.coords(f))


def two_term_hom(X: TwoTermComplex, Y: TwoTermComplex, shift: int = 0) -> HomK:
    return HomK(X, Y, shift)


# ------------------------------------------------------------ silting objects

@dataclass(eq=False)
class SiltingObject:
    summands: list

    @property
    def algebra(self):
        return self.summands[0].algebra

    def sorted(self) -> "SiltingObject":
        return SiltingObject(sorted(self.summands, key=TwoTermComplex.sort_key))

    def g_vectors(self) -> list[tuple[int, ...]]:
        return [c.g_vector() for c in self.summands]

    def same_as(self, other: "SiltingObject") -> bool:
        _, a, b = match_summands(self.summands, other.summands)
        return not a and not b and len(self.summands) == len(other.summands)

    def to_json(self) -> list:
        return [c.describe() for c in self.summands]


def presilting(summands: list[TwoTermComplex]) -> bool:
    return all(two_term_hom(x, y, 1).dim == 0 for x in summands for y in summands)


def distinct_count(summands: list[TwoTermComplex]) -> int:
    reps: list[TwoTermComplex] = []
    for c in summands:
        if not any(homotopy_isomorphic(c, r) for r in reps):
            reps.append(c)
    return len(reps)


def is_two_term_silting(sigma: SiltingObject) -> bool:
    """Presilting with as many pairwise non-isomorphic indecomposable summands as vertices."""
    parts = [x for c in sigma.summands for x in c.components()]
    return presilting(parts) and distinct_count(parts) == sigma.algebra.n_vertices


def algebra_object(algebra) -> SiltingObject:
    return SiltingObject([TwoTermComplex.stalk(algebra, v) for v in algebra.vertices])


def shifted_algebra(algebra) -> SiltingObject:
    return SiltingObject([TwoTermComplex.shifted(algebra, v) for v in algebra.vertices])


def ext_projectives(T) -> list[int]:
    amb = T.ambient
    return [i for i in T if all(ext_dim(amb[i], amb[j]) == 0 for j in T)]


def silting_from_torsion_class(T) -> SiltingObject:
    """Minimal presentations of the Ext-projectives of ``T``, plus ``P(v) -> 0`` off its support."""
    from .torsion import gen_closure

    if gen_closure(T).ids != T.ids:
        raise TorsmutError("not a torsion class")
    amb = T.ambient
    alg = amb.algebra
    projs = ext_projectives(T)
    summands = [TwoTermComplex.from_presentation(amb[i]) for i in projs]
    support = {v for i in T for v, d in zip(alg.vertices, amb[i].dims) if d}
    summands += [TwoTermComplex.shifted(alg, v) for v in alg.vertices if v not in support]
    return SiltingObject(summands).sorted()


def torsion_class_from_silting(sigma: SiltingObject, ambient):
    from .torsion import IndSet, gen_closure

    ids = set()
    for c in sigma.summands:
        H = c.h0()
        if H.total_dim:
            ids.update(ambient.identify(H))
    return gen_closure(IndSet.of(ambient, ids))


def silting_order_geq(sigma: SiltingObject, tau: SiltingObject) -> bool:
    """``sigma >= tau``: Hom(sigma, tau[1]) = 0."""
    return all(two_term_hom(x, y, 1).dim == 0 for x in sigma.summands for y in tau.summands)


# ------------------------------------------------------------ approximations

@dataclass
class Approximation:
    target: list            # summands of the approximating object (left) or source (right)
    phi: ChainMap
    direction: str
    minimal: bool


def _sum_with_maps(parts: list[TwoTermComplex], maps: list[ChainMap], X: TwoTermComplex, direction: str):
    alg = X.algebra
    A = sum_complexes(parts, alg)
    if direction == "left":
        phi = ChainMap(X, A, _stack_rows([m.f1 for m in maps], X.Pm1, A.Pm1),
                       _stack_rows([m.f0 for m in maps], X.P0, A.P0))
    else:
        phi = ChainMap(A, X, _stack_cols([m.f1 for m in maps], A.Pm1, X.Pm1),
                       _stack_cols([m.f0 for m in maps], A.P0, X.P0))
    return A, phi


def _approx_holds(X: TwoTermComplex, shared: list[TwoTermComplex], parts, maps, direction: str) -> bool:
    p = X.algebra.p
    for Q in shared:
        if direction == "left":
            H = two_term_hom(X, Q)
            rows = [H.coords(g @ m) for P, m in zip(parts, maps) for g in two_term_hom(P, Q).basis()]
        else:
            H = two_term_hom(Q, X)
            rows = [H.coords(m @ g) for P, m in zip(parts, maps) for g in two_term_hom(Q, P).basis()]
        r = linalg.rank(np.array(rows).reshape(len(rows), H.dim), p) if rows and H.dim else 0
        if r < H.dim:
            return False
    return True


def _is_minimal(X: TwoTermComplex, A: TwoTermComplex, phi: ChainMap, direction: str, cap: int) -> bool:
    """Every ``h`` in End(A) with ``h phi = phi`` (left) or ``phi h = phi`` (right) is invertible.

    ``A`` is a sum of reduced complexes, so a homotopy equivalence of ``A`` is
    an isomorphism of complexes on any representative.
    """
    End = two_term_hom(A, A)
    basis = End.basis()
    p = X.algebra.p
    if p ** len(basis) > cap:
        raise CapExceeded("endomorphism space too large for the minimality check")
    H = two_term_hom(X, A) if direction == "left" else two_term_hom(A, X)
    for coeffs in product(range(p), repeat=len(basis)):
        h = ChainMap(A, A, Mor.zero(A.Pm1, A.Pm1), Mor.zero(A.P0, A.P0))
        for c, b in zip(coeffs, basis):
            if c:
                h = h + b.scale(c)
        diff = (h @ phi if direction == "left" else phi @ h) + phi.scale(p - 1)
        if H.is_null(diff) and not h.is_iso_of_complexes():
            return False
    return True


def approximation(X: TwoTermComplex, shared: list[TwoTermComplex], direction: str,
                  cap: int | None = None) -> Approximation:
    """Minimal left (or right) add(shared)-approximation of ``X`` in the homotopy category.

    Start from the universal map to (from) the sum of all basis maps, then
    drop copies while the approximation property survives.
    """
    cap = END_ENUM_CAP if cap is None else cap
    parts, maps = [], []
    for Q in shared:
        if direction == "left":
            for f in two_term_hom(X, Q).basis():
                parts.append(Q)
                maps.append(f)
        else:
            for f in two_term_hom(Q, X).basis():
                parts.append(Q)
                maps.append(f)
    k = 0
    while k < len(parts):
        trial_p, trial_m = parts[:k] + parts[k + 1:], maps[:k] + maps[k + 1:]
        if _approx_holds(X, shared, trial_p, trial_m, direction):
            parts, maps = trial_p, trial_m
        else:
            k += 1
    A, phi = _sum_with_maps(parts, maps, X, direction)
    return Approximation(parts, phi, direction, _is_minimal(X, A, phi, direction, cap))


def _split_mono(f: Mor) -> bool:
    if f.source.total_dim == 0:
        return True
    basis = hom_space(f.target, f.source)
    if not basis:
        return False
    m = np.stack([(r @ f).flat() for r in basis], axis=1)
    try:
        linalg.solve(m, f.source.identity().flat(), f.p)
    except TorsmutError:
        return False
    return True


def _split_epi(f: Mor) -> bool:
    if f.target.total_dim == 0:
        return True
    basis = hom_space(f.target, f.source)
    if not basis:
        return False
    m = np.stack([(f @ s).flat() for s in basis], axis=1)
    try:
        linalg.solve(m, f.target.identity().flat(), f.p)
    except TorsmutError:
        return False
    return True


def cone_two_term(phi: ChainMap, direction: str) -> TwoTermComplex | None:
    """Third vertex of the approximation triangle, reduced to two terms.

    Left (``phi : X -> A``): the cone ``X^-1 -> X^0 + A^-1 -> A^0`` is
    two-term up to homotopy when the first map is split mono.  Right
    (``phi : A -> X``): the cocone ``A^-1 -> A^0 + X^-1 -> X^0`` is two-term
    when the last map is split epi.  ``None`` when the reduction fails.
    """
    alg = phi.source.algebra
    p = alg.p
    S, T = phi.source, phi.target
    mid = direct_sum(S.P0, T.Pm1)
    d2 = Mor(S.Pm1, mid, tuple(np.vstack([(-a) % p, b]) for a, b in zip(S.d.comps, phi.f1.comps)))
    d1 = Mor(mid, T.P0, tuple(np.hstack([a, b]) for a, b in zip(phi.f0.comps, T.d.comps)))
    if direction == "left":
        if not _split_mono(d2):
            return None
        Q, pi = cokernel_of(d2)
        return TwoTermComplex(Q, T.P0, factor_through_epi(pi, d1))
    if not _split_epi(d1):
        return None
    K, inc = kernel_of(d1)
    return TwoTermComplex(S.Pm1, K, factor_through_mono(inc, d2))


@dataclass
class TriangleReport:
    ok: bool
    trivial: bool = False
    direction: str | None = None
    reason: str = ""
    approximation: Approximation | None = field(default=None, repr=False)


def verify_mutation_triangle(sigma: SiltingObject, sigma2: SiltingObject, i: int | None = None) -> TriangleReport:
    """Check that ``sigma2`` is the irreducible mutation of ``sigma`` at summand ``i``."""
    pairs, lost, gained = match_summands(sigma.summands, sigma2.summands)
    if not lost and not gained:
        return TriangleReport(True, trivial=True, reason="no summand exchanged")
    if len(lost) != 1 or len(gained) != 1:
        return TriangleReport(False, reason=f"{len(lost)} summands leave and {len(gained)} enter")
    if i is not None and lost[0] != i:
        return TriangleReport(False, reason=f"exchanged summand is {lost[0]}, not {i}")
    X = sigma.summands[lost[0]]
    new = sigma2.summands[gained[0]]
    shared = [sigma.summands[a] for a, _ in pairs]
    for direction in ("left", "right"):
        ap = approximation(X, shared, direction)
        C = cone_two_term(ap.phi, direction)
        if C is not None and homotopy_isomorphic(C, new):
            if not ap.minimal:
                return TriangleReport(False, direction=direction, reason="approximation is not minimal", approximation=ap)
            return TriangleReport(True, direction=direction, approximation=ap)
    return TriangleReport(False, reason="no approximation triangle produces the new summand")


def mutate_silting(sigma: SiltingObject, i: int, direction: str, lattice) -> SiltingObject:
    """Irreducible left or right mutation at summand ``i``.

    The result is found through the lattice (left mutation lowers the
    torsion class along a cover, right mutation raises it) and then checked
    against the approximation triangle.
    """
    if direction not in ("left", "right"):
        raise TorsmutError("direction must be 'left' or 'right'")
    if not is_two_term_silting(sigma):
        raise NotSilting("input is not a two-term silting object")
    if not 0 <= i < len(sigma.summands):
        raise TorsmutError(f"summand index {i} out of range")
    amb = lattice.ambient
    T = torsion_class_from_silting(sigma, amb)
    k = lattice.index_of(T)
    cands = [c.lower for c in lattice.covers if c.upper == k] if direction == "left" else \
            [c.upper for c in lattice.covers if c.lower == k]
    for j in cands:
        tau = lattice.silting(j)
        pairs, lost, gained = match_summands(sigma.summands, tau.summands)
        if lost == [i] and len(gained) == 1:
            rep = verify_mutation_triangle(sigma, tau, i)
            if not rep.ok or rep.direction != direction:
                raise TorsmutError(f"mutation triangle check failed: {rep.reason}")
            return tau
    raise MutationOutOfRange(f"no {direction} mutation at summand {i} within two-term complexes")
