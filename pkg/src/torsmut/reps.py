"""Representations of bound quivers, their morphisms and basic constructions."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg
from .errors import CapExceeded, TorsmutError

HOM_ENUM_CAP = 2**16


@dataclass(eq=False)
class Rep:
    """A finite-dimensional module: one space per vertex, one matrix per arrow.

    ``dims`` follows ``algebra.vertices``; ``mats[a]`` has shape
    ``(dim at target, dim at source)``.
    """

    algebra: object
    dims: tuple[int, ...]
    mats: dict

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        p = self.algebra.p
        self.mats = {a.name: np.asarray(self.mats[a.name], dtype=np.int64).reshape(self.dim_at(a.target), self.dim_at(a.source)) % p
                     for a in self.algebra.arrows}

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_at(self, v: str) -> int:
        return self.dims[self.algebra.vertex_index[v]]

    def key(self) -> tuple:
        return (self.dims, tuple(self.mats[a.name].tobytes() for a in self.algebra.arrows))

    def sort_key(self) -> tuple:
        return (self.total_dim, self.dims, tuple(tuple(self.mats[a.name].ravel()) for a in self.algebra.arrows))

    def path_map(self, arrows) -> np.ndarray:
        """Matrix of a path given in traversal order."""
        if not arrows:
            raise ValueError("use the identity for trivial paths")
        m = self.mats[arrows[0]]
        for name in arrows[1:]:
            m = (self.mats[name] @ m) % self.p
        return m

    def identity(self) -> "Mor":
        return Mor(self, self, tuple(linalg.identity(d) for d in self.dims))

    def to_json(self) -> dict:
        return {
            "dims": {v: d for v, d in zip(self.algebra.vertices, self.dims)},
            "mats": {a.name: self.mats[a.name].tolist() for a in self.algebra.arrows},
        }

    @classmethod
    def from_json(cls, algebra, data: dict) -> "Rep":
        try:
            dims = tuple(int(data["dims"].get(v, 0)) for v in algebra.vertices)
            mats = {}
            for a in algebra.arrows:
                shape = (dims[algebra.vertex_index[a.target]], dims[algebra.vertex_index[a.source]])
                raw = data.get("mats", {}).get(a.name)
                mats[a.name] = linalg.zeros(*shape) if raw is None or shape[0] * shape[1] == 0 else linalg.as_mat(raw, algebra.p, shape)
        except (KeyError, TypeError, ValueError) as exc:
            raise TorsmutError(f"malformed module definition: {exc}") from exc
        return cls(algebra, dims, mats)

    @classmethod
    def zero(cls, algebra) -> "Rep":
        return cls(algebra, (0,) * algebra.n_vertices, {a.name: linalg.zeros(0, 0) for a in algebra.arrows})

    def __repr__(self):
        return f"Rep(dims={self.dims})"


@dataclass(eq=False)
class Mor:
    """A morphism of representations, one matrix per vertex."""

    source: Rep
    target: Rep
    comps: tuple

    def __post_init__(self):
        p = self.source.p
        self.comps = tuple(np.asarray(c, dtype=np.int64).reshape(t, s) % p
                           for c, s, t in zip(self.comps, self.source.dims, self.target.dims))

    @property
    def p(self) -> int:
        return self.source.p

    def __matmul__(self, other: "Mor") -> "Mor":
        """``f @ g`` is the composite ``f o g``."""
        return Mor(other.source, self.target, tuple((a @ b) % self.p for a, b in zip(self.comps, other.comps)))

    def __add__(self, other: "Mor") -> "Mor":
        return Mor(self.source, self.target, tuple((a + b) % self.p for a, b in zip(self.comps, other.comps)))

    def scale(self, c: int) -> "Mor":
        return Mor(self.source, self.target, tuple((c * a) % self.p for a in self.comps))

    def flat(self) -> np.ndarray:
        if not self.comps:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([c.ravel() for c in self.comps])

    def is_zero(self) -> bool:
        return not any(np.any(c) for c in self.comps)

    def is_iso(self) -> bool:
        return all(linalg.is_invertible(c, self.p) for c in self.comps)

    def is_valid(self) -> bool:
        for a in self.source.algebra.arrows:
            i, j = self.source.algebra.vertex_index[a.source], self.source.algebra.vertex_index[a.target]
            lhs = (self.comps[j] @ self.source.mats[a.name]) % self.p
            rhs = (self.target.mats[a.name] @ self.comps[i]) % self.p
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "Mor":
        return cls(source, target, tuple(linalg.zeros(t, s) for s, t in zip(source.dims, target.dims)))

    @classmethod
    def from_flat(cls, source: Rep, target: Rep, vec) -> "Mor":
        comps, pos = [], 0
        for s, t in zip(source.dims, target.dims):
            comps.append(np.asarray(vec[pos:pos + s * t]).reshape(t, s))
            pos += s * t
        return cls(source, target, tuple(comps))


def validate_rep(X: Rep) -> str | None:
    """``None`` if ``X`` is a valid module, else a description of the first violation."""
    alg = X.algebra
    for a in alg.arrows:
        shape = (X.dim_at(a.target), X.dim_at(a.source))
        if X.mats[a.name].shape != shape:
            return f"arrow {a.name}: matrix shape {X.mats[a.name].shape} != {shape}"
    for r in alg.relations:
        if np.any(X.path_map(r)):
            return f"relation {'*'.join(r)} is not zero"
    return None


# ---------------------------------------------------------------- Hom spaces

def hom_matrix(X: Rep, Y: Rep) -> np.ndarray:
    """Linear constraints whose kernel is Hom(X, Y) in the flattened layout of :meth:`Mor.flat`."""
    alg, p = X.algebra, X.p
    offsets, pos = [], 0
    for dx, dy in zip(X.dims, Y.dims):
        offsets.append(pos)
        pos += dx * dy
    blocks = []
    for a in alg.arrows:
        s, t = alg.vertex_index[a.source], alg.vertex_index[a.target]
        rows = Y.dims[t] * X.dims[s]
        if rows == 0:
            continue
        block = linalg.zeros(rows, pos)
        # f_t M^X_a - M^Y_a f_s = 0, row-major vectorisation
        if X.dims[t] and Y.dims[t]:
            block[:, offsets[t]:offsets[t] + Y.dims[t] * X.dims[t]] += np.kron(linalg.identity(Y.dims[t]), X.mats[a.name].T)
        if X.dims[s] and Y.dims[s]:
            block[:, offsets[s]:offsets[s] + Y.dims[s] * X.dims[s]] -= np.kron(Y.mats[a.name], linalg.identity(X.dims[s]))
        blocks.append(block % p)
    if not blocks:
        return linalg.zeros(0, pos)
    return np.vstack(blocks)


def hom_space(X: Rep, Y: Rep) -> list[Mor]:
    """Basis of Hom(X, Y)."""
    m = hom_matrix(X, Y)
    if m.shape[1] == 0:
        return []
    basis = linalg.kernel_basis(m, X.p)
    return [Mor.from_flat(X, Y, basis[:, k]) for k in range(basis.shape[1])]


def hom_dim(X: Rep, Y: Rep) -> int:
    m = hom_matrix(X, Y)
    return m.shape[1] - linalg.rank(m, X.p)


def mor_coords(f: Mor, basis: list[Mor]) -> np.ndarray:
    """Coordinates of ``f`` in a basis of its Hom space."""
    if not basis:
        if not f.is_zero():
            raise TorsmutError("morphism outside the span of the given basis")
        return np.zeros(0, dtype=np.int64)
    m = np.stack([b.flat() for b in basis], axis=1)
    return linalg.solve(m, f.flat(), f.p)


# ------------------------------------------------------- sums, kernels, images

def direct_sum(*reps: Rep) -> Rep:
    if not reps:
        raise ValueError("direct_sum needs at least one summand")
    alg = reps[0].algebra
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(alg.n_vertices))
    mats = {}
    for a in alg.arrows:
        m = linalg.zeros(dims[alg.vertex_index[a.target]], dims[alg.vertex_index[a.source]])
        r0 = c0 = 0
        for r in reps:
            blk = r.mats[a.name]
            m[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = blk
            r0 += blk.shape[0]
            c0 += blk.shape[1]
        mats[a.name] = m
    return Rep(alg, dims, mats)


def injections(reps: list[Rep], total: Rep) -> list[Mor]:
    out, offs = [], [0] * total.algebra.n_vertices
    for r in reps:
        comps = []
        for i, d in enumerate(r.dims):
            c = linalg.zeros(total.dims[i], d)
            c[offs[i]:offs[i] + d, :] = linalg.identity(d)
            comps.append(c)
            offs[i] += d
        out.append(Mor(r, total, tuple(comps)))
    return out


def projections(reps: list[Rep], total: Rep) -> list[Mor]:
    return [Mor(total, r, tuple(c.T for c in inc.comps)) for r, inc in zip(reps, injections(reps, total))]


def sub_from_bases(X: Rep, bases) -> tuple[Rep, Mor]:
    """Submodule spanned vertexwise by the columns of ``bases`` (assumed invariant)."""
    alg, p = X.algebra, X.p
    dims = tuple(b.shape[1] for b in bases)
    mats = {}
    for a in alg.arrows:
        s, t = alg.vertex_index[a.source], alg.vertex_index[a.target]
        if dims[s] == 0 or dims[t] == 0:
            mats[a.name] = linalg.zeros(dims[t], dims[s])
        else:
            mats[a.name] = linalg.solve(bases[t], (X.mats[a.name] @ bases[s]) % p, p)
    S = Rep(alg, dims, mats)
    return S, Mor(S, X, tuple(bases))


def kernel_of(f: Mor) -> tuple[Rep, Mor]:
    bases = [linalg.kernel_basis(c, f.p) if c.shape[1] else linalg.zeros(0, 0) for c in f.comps]
    bases = [b if b.shape[0] == d else linalg.zeros(d, 0) for b, d in zip(bases, f.source.dims)]
    return sub_from_bases(f.source, bases)


def image_of(f: Mor) -> tuple[Rep, Mor, Mor]:
    p = f.p
    bases = [linalg.column_basis(c, p) if c.size else linalg.zeros(c.shape[0], 0) for c in f.comps]
    I, mono = sub_from_bases(f.target, bases)
    epi_comps = []
    for b, c in zip(bases, f.comps):
        epi_comps.append(linalg.solve(b, c, p) if b.shape[1] and c.shape[1] else linalg.zeros(b.shape[1], c.shape[1]))
    return I, mono, Mor(f.source, I, tuple(epi_comps))


def cokernel_of(f: Mor) -> tuple[Rep, Mor]:
    alg, p = f.target.algebra, f.p
    Y = f.target
    proj = []
    for c, d in zip(f.comps, Y.dims):
        if d == 0:
            proj.append(linalg.zeros(0, 0))
        elif c.shape[1] == 0:
            proj.append(linalg.identity(d))
        else:
            proj.append(linalg.left_kernel(c, p))
    dims = tuple(q.shape[0] for q in proj)
    mats = {}
    for a in alg.arrows:
        s, t = alg.vertex_index[a.source], alg.vertex_index[a.target]
        if dims[s] == 0 or dims[t] == 0:
            mats[a.name] = linalg.zeros(dims[t], dims[s])
            continue
        right_inv = linalg.solve(proj[s], linalg.identity(dims[s]), p)
        mats[a.name] = linalg.mul(proj[t], Y.mats[a.name], right_inv, p=p)
    C = Rep(alg, dims, mats)
    return C, Mor(Y, C, tuple(q.reshape(dq, dy) for q, dq, dy in zip(proj, dims, Y.dims)))


def quotient_by(inclusion: Mor) -> tuple[Rep, Mor]:
    return cokernel_of(inclusion)


def compose_power(f: Mor, n: int) -> Mor:
    result = f.source.identity()
    base = f
    while n:
        if n & 1:
            result = base @ result
        base = base @ base
        n >>= 1
    return result


# ------------------------------------------------------------ decomposition

def _fitting_split(e: Mor) -> bool:
    """True when ``e^n`` is neither zero nor invertible (n = total dim)."""
    en = compose_power(e, max(1, e.source.total_dim))
    r = sum(linalg.rank(c, e.p) for c in en.comps if c.size)
    return 0 < r < e.source.total_dim


def _endo_candidates(basis: list[Mor], cap: int):
    yield from basis
    p = basis[0].p
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for c in range(1, p):
                yield basis[i] + basis[j].scale(c)
    d = len(basis)
    if p**d > cap:
        raise CapExceeded(f"End has {p}^{d} elements, over the enumeration cap {cap}")
    for coeffs in product(range(p), repeat=d):
        if sum(1 for c in coeffs if c) <= 2:
            continue
        f = basis[0].scale(coeffs[0])
        for c, b in zip(coeffs[1:], basis[1:]):
            if c:
                f = f + b.scale(c)
        yield f


def splitting_endomorphism(X: Rep, cap: int | None = None) -> Mor | None:
    """An endomorphism whose Fitting decomposition is nontrivial, or ``None`` if End(X) is local.

    Basis elements are tried first, then two-term combinations; only if both
    fail is the whole of End(X) enumerated (subject to ``cap``).
    """
    cap = HOM_ENUM_CAP if cap is None else cap
    if X.total_dim == 0:
        return None
    basis = hom_space(X, X)
    if len(basis) == 1:
        return None
    for e in _endo_candidates(basis, cap):
        if _fitting_split(e):
            return e
    return None


def is_indecomposable(X: Rep, cap: int | None = None) -> bool:
    cap = HOM_ENUM_CAP if cap is None else cap
    return X.total_dim > 0 and splitting_endomorphism(X, cap) is None


def decompose(X: Rep, cap: int | None = None) -> list[Rep]:
    """Indecomposable summands of ``X`` (Krull-Schmidt multiset), in canonical order."""
    cap = HOM_ENUM_CAP if cap is None else cap
    out: list[Rep] = []
    stack = [X]
    while stack:
        Y = stack.pop()
        if Y.total_dim == 0:
            continue
        e = splitting_endomorphism(Y, cap)
        if e is None:
            out.append(Y)
            continue
        en = compose_power(e, Y.total_dim)
        K, _ = kernel_of(en)
        I, _, _ = image_of(en)
        stack.extend([I, K])
    return sorted(out, key=Rep.sort_key)


def is_brick(X: Rep) -> bool:
    """End(X) is a division ring.  Over a finite field: every nonzero endomorphism is invertible."""
    if X.total_dim == 0:
        return False
    basis = hom_space(X, X)
    if len(basis) == 1:
        return True
    p = X.p
    if p ** len(basis) > HOM_ENUM_CAP:
        raise CapExceeded("End too large to certify brick property")
    for coeffs in product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        f = Mor.zero(X, X)
        for c, b in zip(coeffs, basis):
            if c:
                f = f + b.scale(c)
        if not f.is_iso():
            return False
    return True


# -------------------------------------------------------------- isomorphism

def _iso_indecomposable(X: Rep, Y: Rep) -> bool:
    # X has local End: the non-isomorphisms X -> Y form a proper subspace,
    # so if X ~ Y some basis element of Hom(X, Y) is already invertible.
    return any(f.is_iso() for f in hom_space(X, Y))


def is_isomorphic_exhaustive(X: Rep, Y: Rep, cap: int | None = None) -> bool:
    """Search every element of Hom(X, Y) for a vertexwise invertible one."""
    cap = HOM_ENUM_CAP if cap is None else cap
    if X.dims != Y.dims:
        return False
    basis = hom_space(X, Y)
    if X.total_dim == 0:
        return True
    if X.p ** len(basis) > cap:
        raise CapExceeded("Hom space too large for exhaustive isomorphism search")
    for coeffs in product(range(X.p), repeat=len(basis)):
        f = Mor.zero(X, Y)
        for c, b in zip(coeffs, basis):
            if c:
                f = f + b.scale(c)
        if f.is_iso():
            return True
    return False


def is_isomorphic(X: Rep, Y: Rep, cap: int | None = None) -> bool:
    cap = HOM_ENUM_CAP if cap is None else cap
    if X.dims != Y.dims:
        return False
    if X.total_dim == 0:
        return True
    basis = hom_space(X, Y)
    if any(f.is_iso() for f in basis):
        return True
    if X.p ** len(basis) <= min(cap, 2**8):
        return is_isomorphic_exhaustive(X, Y, cap)
    return multisets_isomorphic(decompose(X, cap), decompose(Y, cap))


def multisets_isomorphic(xs: list[Rep], ys: list[Rep]) -> bool:
    """Match two lists of indecomposables up to isomorphism."""
    if len(xs) != len(ys):
        return False
    remaining = list(ys)
    for x in xs:
        for k, y in enumerate(remaining):
            if x.dims == y.dims and _iso_indecomposable(x, y):
                del remaining[k]
                break
        else:
            return False
    return True


# ------------------------------------------------------ submodules and radical

def _topological_order(algebra) -> list[int]:
    indeg = {v: 0 for v in algebra.vertices}
    for a in algebra.arrows:
        if a.source != a.target:
            indeg[a.target] += 1
    order, ready = [], [v for v in algebra.vertices if indeg[v] == 0]
    seen = set()
    while len(order) < algebra.n_vertices:
        if not ready:
            ready = [next(v for v in algebra.vertices if v not in seen)]
        v = ready.pop(0)
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        for a in algebra.arrows_out_of(v):
            indeg[a.target] -= 1
            if indeg[a.target] == 0 and a.target not in seen:
                ready.append(a.target)
    return [algebra.vertex_index[v] for v in order]


def _contained(rows_src: np.ndarray, mat: np.ndarray, rows_tgt: np.ndarray, piv_tgt: list[int], p: int) -> bool:
    if rows_src.shape[0] == 0:
        return True
    images = (mat @ rows_src.T).T % p
    if rows_tgt.shape[0] == 0:
        return not np.any(images)
    resid = (images - images[:, piv_tgt] @ rows_tgt) % p
    return not np.any(resid)


def submodule_tuples(X: Rep, dims=None, cap: int | None = None):
    """Yield every invariant tuple of rref row bases (one per vertex).

    With ``dims`` given, only submodules of that dimension vector are produced.
    """
    cap = linalg.SUBSPACE_CAP if cap is None else cap
    alg, p = X.algebra, X.p
    order = _topological_order(alg)
    arrows = [(alg.vertex_index[a.source], alg.vertex_index[a.target], X.mats[a.name]) for a in alg.arrows]
    options = []
    for i in range(alg.n_vertices):
        ks = [dims[i]] if dims is not None else range(X.dims[i] + 1)
        opts = []
        for k in ks:
            if k > X.dims[i]:
                return
            for m in linalg.subspace_rrefs(X.dims[i], k, p, cap):
                opts.append((m, list(np.argmax(m, axis=1)) if k else []))
        options.append(opts)

    chosen: dict[int, tuple] = {}
    budget = [0]

    def rec(pos):
        if pos == len(order):
            yield tuple(chosen[i][0] for i in range(alg.n_vertices))
            return
        v = order[pos]
        for opt in options[v]:
            budget[0] += 1
            if budget[0] > cap:
                raise CapExceeded("submodule enumeration exceeded its cap")
            chosen[v] = opt
            ok = True
            for s, t, m in arrows:
                if s in chosen and t in chosen and (s == v or t == v):
                    if not _contained(chosen[s][0], m, chosen[t][0], chosen[t][1], p):
                        ok = False
                        break
            if ok:
                yield from rec(pos + 1)
            del chosen[v]

    yield from rec(0)


def enumerate_submodules(X: Rep, dims=None, cap: int | None = None) -> list[tuple[Rep, Mor]]:
    """All submodules with their inclusions, sorted by dimension vector then entries."""
    cap = linalg.SUBSPACE_CAP if cap is None else cap
    found = []
    for rows in submodule_tuples(X, dims, cap):
        key = (tuple(r.shape[0] for r in rows), tuple(tuple(r.ravel()) for r in rows))
        found.append((key, rows))
    found.sort(key=lambda kv: kv[0])
    out = []
    for _, rows in found:
        bases = [r.T.copy() if r.shape[0] else linalg.zeros(d, 0) for r, d in zip(rows, X.dims)]
        out.append(sub_from_bases(X, bases))
    return out


def radical_top(X: Rep) -> tuple[tuple[Rep, Mor], tuple[Rep, Mor]]:
    alg, p = X.algebra, X.p
    bases = []
    for i, v in enumerate(alg.vertices):
        ims = [X.mats[a.name] for a in alg.arrows_into(v) if X.mats[a.name].size]
        if ims and X.dims[i]:
            bases.append(linalg.column_basis(np.hstack(ims), p))
        else:
            bases.append(linalg.zeros(X.dims[i], 0))
    rad, inc = sub_from_bases(X, bases)
    top, proj = cokernel_of(inc)
    return (rad, inc), (top, proj)
