"""Quiver algebras with monomial relations and their standard modules.

Paths are written in traversal order: ``("a", "b")`` means first ``a``, then
``b``.  On a representation the arrow matrix ``M_a`` maps the space at the
source of ``a`` to the space at its target, so the path ``("a", "b")`` acts as
``M_b @ M_a``.
"""
from __future__ import annotations

import string
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import MalformedRelation, NotFiniteDimensional, TorsmutError

PATH_CAP = 10_000


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise TorsmutError("vertex ids must be distinct")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise TorsmutError("arrow names must be distinct")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise TorsmutError(f"arrow {a.name} uses an undeclared vertex")


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return "e" + self.source if not self.arrows else "".join(self.arrows)


@dataclass(frozen=True)
class AlgebraFamily:
    """Built-in algebra families: ``linear_an``, ``cyclic_nakayama``, ``kronecker``, ``point``."""

    tag: str
    n: int = 1
    ell: int = 2

    def __post_init__(self):
        if self.tag not in ("linear_an", "cyclic_nakayama", "kronecker", "point"):
            raise TorsmutError(f"unknown algebra family {self.tag!r}")
        if self.n < 1:
            raise TorsmutError("family parameter n must be >= 1")
        if self.tag == "cyclic_nakayama" and self.ell < 2:
            raise TorsmutError("relation length must be >= 2")

    @classmethod
    def parse(cls, text: str) -> "AlgebraFamily":
        """Parse ``a2``, ``an:4``, ``nakayama:3,2``, ``kronecker`` or ``point``."""
        t = text.strip().lower()
        if t in ("kronecker", "point"):
            return cls(t)
        if t.startswith("a") and t[1:].isdigit():
            return cls("linear_an", int(t[1:]))
        name, _, args = t.partition(":")
        nums = [int(x) for x in args.split(",") if x]
        if name in ("an", "linear_an") and len(nums) == 1:
            return cls("linear_an", nums[0])
        if name in ("nakayama", "cyclic_nakayama") and len(nums) == 2:
            return cls("cyclic_nakayama", nums[0], nums[1])
        raise TorsmutError(f"cannot parse algebra family {text!r}")


@dataclass(eq=False)
class QuiverAlgebra:
    quiver: Quiver
    relations: tuple[tuple[str, ...], ...]
    p: int
    path_basis: tuple[Path, ...] = field(default=())

    def __post_init__(self):
        self.vertex_index = {v: i for i, v in enumerate(self.quiver.vertices)}
        self.arrow_by_name = {a.name: a for a in self.quiver.arrows}

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    @property
    def dim(self) -> int:
        return len(self.path_basis)

    def paths_from(self, v: str) -> list[Path]:
        return [q for q in self.path_basis if q.source == v]

    def paths_to(self, v: str) -> list[Path]:
        return [q for q in self.path_basis if q.target == v]

    def arrows_into(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def arrows_out_of(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.arrows],
            "relations": [list(r) for r in self.relations],
        }

    @classmethod
    def from_json(cls, data: dict, p: int | None = None) -> "QuiverAlgebra":
        try:
            quiver = Quiver(
                tuple(str(v) for v in data["vertices"]),
                tuple(Arrow(str(a["name"]), str(a["from"]), str(a["to"])) for a in data["arrows"]),
            )
            relations = [tuple(str(x) for x in r) for r in data.get("relations", [])]
            modulus = int(p if p is not None else data.get("p", linalg.DEFAULT_P))
        except (KeyError, TypeError) as exc:
            raise TorsmutError(f"malformed algebra definition: {exc}") from exc
        return build_algebra(quiver, relations, modulus)


def _contains_relation(arrows: tuple[str, ...], relations: set[tuple[str, ...]]) -> bool:
    # the prefix is already relation-free, so only suffixes can newly match
    return any(arrows[-len(r):] == r for r in relations if len(r) <= len(arrows))


def build_algebra(quiver: Quiver, relations, p: int = linalg.DEFAULT_P, cap: int = PATH_CAP) -> QuiverAlgebra:
    if not linalg.is_prime(p):
        raise TorsmutError(f"field modulus {p} is not prime")
    by_name = {a.name: a for a in quiver.arrows}
    rels = []
    for r in relations:
        r = tuple(r)
        if len(r) < 2:
            raise MalformedRelation(f"relation {r} has length < 2")
        if any(x not in by_name for x in r):
            raise MalformedRelation(f"relation {r} uses an unknown arrow")
        for x, y in zip(r, r[1:]):
            if by_name[x].target != by_name[y].source:
                raise MalformedRelation(f"relation {r} is not a composable path")
        rels.append(r)
    rel_set = set(rels)

    basis = [Path(v, v) for v in quiver.vertices]
    queue = deque(basis)
    while queue:
        path = queue.popleft()
        for a in quiver.arrows:
            if a.source != path.target:
                continue
            arrows = path.arrows + (a.name,)
            if _contains_relation(arrows, rel_set):
                continue
            new = Path(path.source, a.target, arrows)
            basis.append(new)
            if len(basis) > cap:
                raise NotFiniteDimensional(f"more than {cap} nonzero paths; the algebra is not finite-dimensional")
            queue.append(new)
    return QuiverAlgebra(quiver, tuple(rels), p, tuple(basis))


def builtin_algebra(family: AlgebraFamily | str, p: int = linalg.DEFAULT_P) -> QuiverAlgebra:
    if isinstance(family, str):
        family = AlgebraFamily.parse(family)
    if family.tag == "point":
        return build_algebra(Quiver(("1",), ()), [], p)
    if family.tag == "kronecker":
        return build_algebra(Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "1", "2"))), [], p)
    n = family.n
    verts = tuple(str(i) for i in range(1, n + 1))
    if family.tag == "linear_an":
        names = string.ascii_lowercase if n <= 27 else [f"a{i}" for i in range(1, n)]
        arrows = tuple(Arrow(names[i], verts[i], verts[i + 1]) for i in range(n - 1))
        return build_algebra(Quiver(verts, arrows), [], p)
    arrows = tuple(Arrow(f"a{i + 1}", verts[i], verts[(i + 1) % n]) for i in range(n))
    relations = []
    for start in range(n):
        relations.append(tuple(f"a{(start + k) % n + 1}" for k in range(family.ell)))
    return build_algebra(Quiver(verts, arrows), relations, p)


def path_action(algebra: QuiverAlgebra, path: Path, arrow: str) -> Path | None:
    """Extend ``path`` by ``arrow``; ``None`` if the result is zero in the algebra."""
    a = algebra.arrow_by_name[arrow]
    if a.source != path.target:
        return None
    arrows = path.arrows + (arrow,)
    if _contains_relation(arrows, set(algebra.relations)):
        return None
    return Path(path.source, a.target, arrows)


def standard_module(algebra: QuiverAlgebra, kind: str, v: str):
    """Projective, injective or simple module at vertex ``v``."""
    from .reps import Rep

    if v not in algebra.vertex_index:
        raise TorsmutError(f"unknown vertex {v!r}")
    p = algebra.p
    if kind == "simple":
        dims = tuple(1 if w == v else 0 for w in algebra.vertices)
        return Rep(algebra, dims, {a.name: linalg.zeros(dims[algebra.vertex_index[a.target]], dims[algebra.vertex_index[a.source]]) for a in algebra.arrows})

    if kind == "projective":
        # basis at w: paths v -> w; arrow a appends itself to the path
        spaces = {w: [q for q in algebra.paths_from(v) if q.target == w] for w in algebra.vertices}
        mats = {}
        for a in algebra.arrows:
            src, tgt = spaces[a.source], spaces[a.target]
            m = linalg.zeros(len(tgt), len(src))
            for j, q in enumerate(src):
                r = path_action(algebra, q, a.name)
                if r is not None:
                    m[tgt.index(r), j] = 1
            mats[a.name] = m
    elif kind == "injective":
        # basis at w: duals of paths w -> v; arrow a strips itself from the front
        spaces = {w: [q for q in algebra.paths_to(v) if q.source == w] for w in algebra.vertices}
        mats = {}
        for a in algebra.arrows:
            src, tgt = spaces[a.source], spaces[a.target]
            m = linalg.zeros(len(tgt), len(src))
            for j, q in enumerate(src):
                if q.arrows and q.arrows[0] == a.name:
                    m[tgt.index(Path(a.target, v, q.arrows[1:])), j] = 1
            mats[a.name] = m
    else:
        raise TorsmutError(f"unknown module kind {kind!r}")
    dims = tuple(len(spaces[w]) for w in algebra.vertices)
    return Rep(algebra, dims, {k: m % p for k, m in mats.items()})


def projectives(algebra: QuiverAlgebra) -> dict[str, "object"]:
    return {v: standard_module(algebra, "projective", v) for v in algebra.vertices}


def simples(algebra: QuiverAlgebra) -> dict[str, "object"]:
    return {v: standard_module(algebra, "simple", v) for v in algebra.vertices}


def check_path_basis(algebra: QuiverAlgebra) -> bool:
    """Path basis is closed under nonzero subpaths and avoids every relation."""
    names = {q.arrows for q in algebra.path_basis}
    for q in algebra.path_basis:
        for i in range(len(q.arrows)):
            for j in range(i + 1, len(q.arrows) + 1):
                if q.arrows[i:j] not in names:
                    return False
        if q.arrows in set(algebra.relations):
            return False
    return True


def total_projective_dim(algebra: QuiverAlgebra) -> int:
    return int(sum(np.sum(standard_module(algebra, "projective", v).dims) for v in algebra.vertices))
