"""Dense exact linear algebra over a prime field F_p.

Matrices are plain ``numpy.int64`` arrays with entries in ``[0, p)``.  Every
function takes the modulus explicitly; nothing here holds state, so all of it
is safe to call from anywhere.
"""
from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .errors import CapExceeded, InconsistentSystem

DEFAULT_P = 2
SUBSPACE_CAP = 2**20


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def as_mat(entries, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce nested lists (or an array) to a reduced int64 matrix."""
    a = np.array(entries, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    elif a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=np.int64)
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(*mats: np.ndarray, p: int) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = (out @ m) % p
    return out


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` and its pivot columns."""
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of ``{x : m x = 0}``."""
    cols = m.shape[1]
    if m.shape[0] == 0:
        return identity(cols)
    r, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(pivots):
            basis[c, k] = (-r[i, f]) % p
    return basis


def left_kernel(m: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of ``{y : y m = 0}``."""
    return kernel_basis(m.T, p).T.copy()


def solve(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Particular solution of ``m x = b`` with free variables set to zero.

    ``b`` may be a vector or a matrix of right-hand sides (solved columnwise).
    Raises :class:`InconsistentSystem` if some column of ``b`` is not in the
    column space of ``m``.
    """
    b = np.asarray(b, dtype=np.int64) % p
    vector = b.ndim == 1
    rhs = b.reshape(-1, 1) if vector else b
    rows, cols = m.shape
    if rhs.shape[0] != rows:
        raise ValueError(f"right-hand side has {rhs.shape[0]} rows, expected {rows}")
    aug = np.hstack([np.asarray(m, dtype=np.int64).reshape(rows, cols), rhs])
    r, pivots = rref(aug, p)
    x = zeros(cols, rhs.shape[1])
    for i, c in enumerate(pivots):
        if c >= cols:
            raise InconsistentSystem("right-hand side is not in the column space")
        x[c] = r[i, cols:]
    if vector:
        return x[:, 0]
    return x


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, pivots = rref(np.hstack([m, identity(n)]), p)
    if [c for c in pivots if c < n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r[:, n:].copy()


def is_invertible(m: np.ndarray, p: int) -> bool:
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def row_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Canonical (rref) row basis of the row space of ``m``."""
    if m.shape[0] == 0:
        return zeros(0, m.shape[1])
    r, pivots = rref(m, p)
    return r[: len(pivots)].copy()


def column_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form the canonical basis of the column space of ``m``."""
    return row_basis(m.T, p).T.copy()


def reduce_mod(basis: np.ndarray, pivots: list[int], v: np.ndarray, p: int) -> np.ndarray:
    """Reduce ``v`` modulo the row space of an rref ``basis``."""
    if not pivots:
        return np.asarray(v, dtype=np.int64) % p
    return (v - v[pivots] @ basis) % p


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    r, pivots = rref(basis, p)
    return not np.any(reduce_mod(r[: len(pivots)], pivots, v, p))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_rrefs(dim: int, sub_dim: int, p: int, cap: int | None = None):
    """Yield every ``sub_dim``-dimensional subspace of F_p^dim as an rref row basis.

    Order is deterministic: by pivot columns, then by free entries.
    """
    cap = SUBSPACE_CAP if cap is None else cap
    if not 0 <= sub_dim <= dim:
        raise ValueError(f"sub_dim {sub_dim} outside [0, {dim}]")
    if p**dim > cap or gaussian_binomial(dim, sub_dim, p) > cap:
        raise CapExceeded(f"subspaces of F_{p}^{dim} exceed the enumeration cap {cap}")
    for pivots in combinations(range(dim), sub_dim):
        pivot_set = set(pivots)
        slots = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, dim) if j not in pivot_set]
        base = zeros(sub_dim, dim)
        for i, c in enumerate(pivots):
            base[i, c] = 1
        for values in product(range(p), repeat=len(slots)):
            m = base.copy()
            for (i, j), v in zip(slots, values):
                m[i, j] = v
            yield m


def enumerate_subspaces(dim: int, sub_dim: int, p: int, cap: int | None = None) -> list[np.ndarray]:
    """All ``sub_dim``-dimensional subspaces of F_p^dim.

    Each subspace is returned as a ``dim x sub_dim`` matrix whose columns are
    the rows of its reduced row echelon basis.
    """
    cap = SUBSPACE_CAP if cap is None else cap
    return [m.T.copy() for m in subspace_rrefs(dim, sub_dim, p, cap)]


class QuotientSpace:
    """A complement of ``sub`` inside ``whole`` with coordinates on the quotient.

    Both arguments are matrices whose rows span subspaces of F_p^N, with the
    row space of ``sub`` contained in that of ``whole``.
    """

    def __init__(self, whole: np.ndarray, sub: np.ndarray, p: int):
        self.p = p
        n = whole.shape[1]
        self.sub = row_basis(sub, p) if sub.shape[0] else zeros(0, n)
        self.sub_pivots = rref(self.sub, p)[1] if self.sub.shape[0] else []
        residues = [reduce_mod(self.sub, self.sub_pivots, w, p) for w in whole]
        self.complement = row_basis(np.array(residues).reshape(len(residues), n), p) if residues else zeros(0, n)
        self.complement_pivots = rref(self.complement, p)[1] if self.complement.shape[0] else []

    @property
    def dim(self) -> int:
        return self.complement.shape[0]

    def coords(self, v: np.ndarray) -> np.ndarray:
        r = reduce_mod(self.sub, self.sub_pivots, np.asarray(v, dtype=np.int64), self.p)
        c = r[self.complement_pivots] if self.complement_pivots else np.zeros(0, dtype=np.int64)
        if np.any(reduce_mod(self.complement, self.complement_pivots, r, self.p)):
            raise InconsistentSystem("vector does not lie in the ambient subspace")
        return c

    def lift(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if self.dim == 0:
            return np.zeros(self.sub.shape[1], dtype=np.int64)
        return (coords @ self.complement) % self.p
