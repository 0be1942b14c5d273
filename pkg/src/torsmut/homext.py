"""Hom spaces, minimal projective presentations and Ext^1 with explicit extensions.

Ext^1(Z, M) is computed from a projective cover ``P0 -> Z`` with kernel
``Omega Z``: every extension is a pushout of ``0 -> Omega Z -> P0 -> Z -> 0``
along some ``h : Omega Z -> M``, and ``h`` gives the split class exactly when
it extends over ``P0``.  So

    Ext^1(Z, M) = Hom(Omega Z, M) / restriction of Hom(P0, M).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import linalg
from .algebra import standard_module
from .errors import CapExceeded
from .reps import (Mor, Rep, cokernel_of, direct_sum, hom_space, kernel_of,
                   radical_top)

EXT_CLASS_CAP = 2**12


def _cache(algebra) -> dict:
    return algebra.__dict__.setdefault("_torsmut_cache", {})


def _rows(vectors, n: int) -> np.ndarray:
    return np.array(vectors, dtype=np.int64).reshape(len(vectors), n) if vectors else linalg.zeros(0, n)


@dataclass
class HomBasis:
    source: Rep
    target: Rep
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> Mor:
        f = Mor.zero(self.source, self.target)
        for c, b in zip(coeffs, self.basis):
            if c % self.source.p:
                f = f + b.scale(int(c))
        return f

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


def hom_basis(X: Rep, Y: Rep) -> HomBasis:
    return HomBasis(X, Y, hom_space(X, Y))


# -------------------------------------------------------------- projectives

def projective(algebra, v: str) -> Rep:
    cache = _cache(algebra).setdefault("proj", {})
    if v not in cache:
        cache[v] = standard_module(algebra, "projective", v)
    return cache[v]


def projective_sum(algebra, vertices) -> Rep:
    """``P(v1) + P(v2) + ...`` in the given order (the zero module if empty)."""
    vertices = list(vertices)
    if not vertices:
        return Rep.zero(algebra)
    return direct_sum(*[projective(algebra, v) for v in vertices])


def map_from_projective(v: str, x, X: Rep) -> Mor:
    """The unique map ``P(v) -> X`` sending ``e_v`` to ``x`` in ``X_v``."""
    alg = X.algebra
    P = projective(alg, v)
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    comps = []
    for w in alg.vertices:
        paths = [q for q in alg.paths_from(v) if q.target == w]
        c = linalg.zeros(X.dim_at(w), len(paths))
        for j, q in enumerate(paths):
            c[:, j] = x if not q.arrows else (X.path_map(q.arrows) @ x) % X.p
        comps.append(c)
    return Mor(P, X, tuple(comps))


def map_from_projective_sum(vertices, elements, X: Rep) -> Mor:
    """Map ``P(v1) + ... -> X`` sending the k-th generator to ``elements[k]``."""
    alg = X.algebra
    P = projective_sum(alg, vertices)
    if not vertices:
        return Mor.zero(P, X)
    parts = [map_from_projective(v, x, X) for v, x in zip(vertices, elements)]
    comps = []
    for i in range(alg.n_vertices):
        blocks = [f.comps[i] for f in parts]
        comps.append(np.hstack(blocks) if blocks else linalg.zeros(X.dims[i], 0))
    return Mor(P, X, tuple(comps))


def generators(vertices, algebra) -> list[tuple[int, int]]:
    """Position ``(vertex index, coordinate)`` of each generator ``e_v`` in a projective sum."""
    offs = [0] * algebra.n_vertices
    out = []
    for v in vertices:
        i = algebra.vertex_index[v]
        for w in algebra.vertices:
            n = sum(1 for q in algebra.paths_from(v) if q.target == w)
            j = algebra.vertex_index[w]
            if j == i:
                # e_v is the first path from v ending at v
                out.append((i, offs[j]))
            offs[j] += n
    return out


def top_vertices(X: Rep) -> tuple[list[str], list[np.ndarray]]:
    """Vertices of a projective cover of ``X`` and lifts of a basis of its top."""
    alg, p = X.algebra, X.p
    (rad, inc), _ = radical_top(X)
    verts, elems = [], []
    for i, v in enumerate(alg.vertices):
        if X.dims[i] == 0:
            continue
        rad_rows = inc.comps[i].T if inc.comps[i].shape[1] else linalg.zeros(0, X.dims[i])
        q = linalg.QuotientSpace(linalg.identity(X.dims[i]), rad_rows, p)
        for row in q.complement:
            verts.append(v)
            elems.append(row.copy())
    return verts, elems


def projective_cover(X: Rep) -> tuple[list[str], Mor]:
    verts, elems = top_vertices(X)
    return verts, map_from_projective_sum(verts, elems, X)


@dataclass
class Presentation:
    """Minimal projective presentation ``P1 --d--> P0 --aug--> X -> 0``.

    ``omega`` is the kernel of ``aug`` with its inclusion ``omega_inc``;
    ``cover1`` is the projective cover ``P1 -> omega``.
    """

    X: Rep
    p1_vertices: list
    p0_vertices: list
    P1: Rep
    P0: Rep
    d: Mor
    aug: Mor
    omega: Rep
    omega_inc: Mor
    cover1: Mor


def minimal_projective_presentation(X: Rep) -> Presentation:
    cache = _cache(X.algebra).setdefault("pres", {})
    key = X.key()
    if key in cache:
        return cache[key]
    v0, aug = projective_cover(X)
    omega, inc = kernel_of(aug)
    v1, cover1 = projective_cover(omega)
    d = inc @ cover1
    pres = Presentation(X, v1, v0, cover1.source, aug.source, d, aug, omega, inc, cover1)
    cache[key] = pres
    return pres


# ---------------------------------------------------------------------- Ext

def factor_through_epi(pi: Mor, f: Mor) -> Mor:
    """``g`` with ``g o pi = f``, assuming ``f`` kills ``ker pi``."""
    p = pi.p
    comps = []
    for pc, fc in zip(pi.comps, f.comps):
        if pc.shape[0] == 0:
            comps.append(linalg.zeros(fc.shape[0], 0))
            continue
        right_inv = linalg.solve(pc, linalg.identity(pc.shape[0]), p)
        comps.append((fc @ right_inv) % p)
    return Mor(pi.target, f.target, tuple(comps))


def factor_through_mono(iota: Mor, f: Mor) -> Mor:
    """``g`` with ``iota o g = f``, assuming ``im f`` lies in ``im iota``."""
    p = iota.p
    comps = []
    for ic, fc in zip(iota.comps, f.comps):
        if ic.shape[1] == 0 or fc.shape[1] == 0:
            comps.append(linalg.zeros(ic.shape[1], fc.shape[1]))
        else:
            comps.append(linalg.solve(ic, fc, p))
    return Mor(f.source, iota.source, tuple(comps))


def lift_through_epi(P_vertices, f: Mor, pi: Mor) -> Mor:
    """Lift ``f : P -> Z`` (P a projective sum on ``P_vertices``) through the epi ``pi : E -> Z``."""
    alg = f.source.algebra
    elems = []
    for i, j in generators(P_vertices, alg):
        z = f.comps[i][:, j]
        elems.append(linalg.solve(pi.comps[i], z, f.p) if pi.comps[i].size else np.zeros(0, dtype=np.int64))
    return map_from_projective_sum(P_vertices, elems, pi.source)


@dataclass
class ExtClass:
    Z: Rep
    M: Rep
    coords: tuple
    cocycle: Mor = field(repr=False)


class ExtSpace:
    """Ext^1(Z, M) with a fixed basis; cocycles are maps ``Omega Z -> M``."""

    def __init__(self, Z: Rep, M: Rep):
        self.Z, self.M, self.p = Z, M, Z.p
        self.pres = minimal_projective_presentation(Z)
        self.hom_omega = hom_space(self.pres.omega, M)
        restr = [f @ self.pres.omega_inc for f in hom_space(self.pres.P0, M)]
        n = sum(a * b for a, b in zip(self.pres.omega.dims, M.dims))
        whole = _rows([f.flat() for f in self.hom_omega], n)
        sub = _rows([f.flat() for f in restr], n)
        self.quotient = linalg.QuotientSpace(whole, sub, self.p)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def cocycle(self, coords) -> Mor:
        vec = self.quotient.lift(coords)
        return Mor.from_flat(self.pres.omega, self.M, vec)

    def coords_of(self, h: Mor) -> np.ndarray:
        return self.quotient.coords(h.flat())

    def ext_class(self, coords) -> ExtClass:
        coords = tuple(int(c) % self.p for c in coords)
        return ExtClass(self.Z, self.M, coords, self.cocycle(coords))

    def basis(self) -> list[ExtClass]:
        eye = linalg.identity(self.dim)
        return [self.ext_class(row) for row in eye]

    def classes(self, cap: int | None = None, nonzero: bool = False):
        """Every class of the space, zero first, in lexicographic coordinate order."""
        cap = EXT_CLASS_CAP if cap is None else cap
        if self.p**self.dim > cap:
            raise CapExceeded(f"Ext space has {self.p}^{self.dim} classes, over the cap {cap}")
        for coords in product(range(self.p), repeat=self.dim):
            if nonzero and not any(coords):
                continue
            yield self.ext_class(coords)

    def middle_term(self, coords) -> tuple[Rep, Mor, Mor]:
        """Pushout of the cover sequence of Z along the cocycle.

        ``E = (M + P0) / {(-h k, k) : k in Omega Z}``.
        """
        h = self.cocycle(coords)
        pres, M = self.pres, self.M
        S = direct_sum(M, pres.P0)
        comps = []
        for hc, ic in zip(h.comps, pres.omega_inc.comps):
            comps.append(np.vstack([(-hc) % self.p, ic]))
        glue = Mor(pres.omega, S, tuple(comps))
        E, pi = cokernel_of(glue)
        m_in = Mor(M, S, tuple(np.vstack([linalg.identity(d), linalg.zeros(q, d)])
                                for d, q in zip(M.dims, pres.P0.dims)))
        incl = pi @ m_in
        to_z = Mor(S, self.Z, tuple(np.hstack([linalg.zeros(z, d), a])
                                     for z, d, a in zip(self.Z.dims, M.dims, pres.aug.comps)))
        proj = factor_through_epi(pi, to_z)
        return E, incl, proj

    def class_of(self, incl: Mor, proj: Mor) -> np.ndarray:
        """Coordinates of the sequence ``0 -> M --incl--> E --proj--> Z -> 0``."""
        pres = self.pres
        g = lift_through_epi(pres.p0_vertices, pres.aug, proj)
        h = factor_through_mono(incl, g @ pres.omega_inc)
        return self.coords_of(h)


def ext_space(Z: Rep, M: Rep) -> ExtSpace:
    cache = _cache(Z.algebra).setdefault("ext", {})
    key = (Z.key(), M.key())
    hit = cache.get(key)
    if hit is not None:
        return hit
    sp = ExtSpace(Z, M)
    cache[key] = sp
    return sp


def ext_basis(Z: Rep, M: Rep) -> list[ExtClass]:
    return ext_space(Z, M).basis()


def ext_dim(Z: Rep, M: Rep) -> int:
    return ext_space(Z, M).dim


def middle_term(coords, Z: Rep, M: Rep) -> tuple[Rep, Mor, Mor]:
    return ext_space(Z, M).middle_term(coords)


def ext_class_of(incl: Mor, proj: Mor) -> np.ndarray:
    return ext_space(proj.target, incl.source).class_of(incl, proj)


def is_split(incl: Mor, proj: Mor) -> bool:
    """Whether a short exact sequence splits, by searching for a retraction of ``incl``."""
    E, M = incl.target, incl.source
    basis = hom_space(E, M)
    if M.total_dim == 0:
        return True
    if not basis:
        return False
    target = M.identity()
    m = np.stack([(b @ incl).flat() for b in basis], axis=1)
    try:
        linalg.solve(m, target.flat(), M.p)
    except Exception:
        return False
    return True


def sum_of_extensions(seqs: list[tuple[Rep, Mor, Mor]]) -> tuple[Rep, Mor, Mor]:
    """Glue extensions ``0 -> M -> E_j -> Z_j -> 0`` with a common ``M``.

    The result is ``0 -> M -> E -> (+) Z_j -> 0`` whose class has the given
    component in each ``Ext^1(Z_j, M)``: it is ``(+) E_j`` modulo the copies
    of ``M`` that sum to zero.
    """
    if len(seqs) == 1:
        return seqs[0]
    M = seqs[0][1].source
    Es = [s[0] for s in seqs]
    total = direct_sum(*Es)
    k = len(seqs)
    # embed each E_j block
    offs = [[0] * M.algebra.n_vertices]
    for E in Es[:-1]:
        offs.append([o + d for o, d in zip(offs[-1], E.dims)])
    Mk = direct_sum(*([M] * (k - 1)))

    def place(j, comp_of, i, width):
        blk = linalg.zeros(total.dims[i], width)
        c = comp_of[i]
        blk[offs[j][i]:offs[j][i] + c.shape[0], :] = c
        return blk

    comps = []
    for i in range(M.algebra.n_vertices):
        cols = []
        for j in range(k - 1):
            cols.append((place(j, seqs[j][1].comps, i, M.dims[i]) - place(k - 1, seqs[-1][1].comps, i, M.dims[i])) % M.p)
        comps.append(np.hstack(cols) if cols else linalg.zeros(total.dims[i], 0))
    E, pi = cokernel_of(Mor(Mk, total, tuple(comps)))
    incl = Mor(M, E, tuple((pc @ place(0, seqs[0][1].comps, i, M.dims[i])) % M.p
                           for i, pc in enumerate(pi.comps)))
    Zs = [s[2].target for s in seqs]
    Zsum = direct_sum(*Zs)
    proj_total = []
    for i in range(M.algebra.n_vertices):
        blocks = [s[2].comps[i] for s in seqs]
        rows = sum(b.shape[0] for b in blocks)
        m = linalg.zeros(rows, total.dims[i])
        r = c = 0
        for b in blocks:
            m[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        proj_total.append(m)
    proj = factor_through_epi(pi, Mor(total, Zsum, tuple(proj_total)))
    return E, incl, proj
