"""Command-line interface: ``torsmut [global options] <command> ...``.

Exit codes: 0 success, 1 a verification found a violation, 2 bad input or
an exceeded cap.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import homext, linalg, reps, silting
from .algebra import QuiverAlgebra, builtin_algebra
from .errors import TorsmutError
from .indec import (DEFAULT_BOUND, enumerate_indecomposables,
                    kronecker_preprojective)
from .lattice import (check_mutation, enumerate_torsion_classes,
                      mutation_interval_top, right_mutations_of,
                      verify_theorem_c)
from .reps import hom_dim
from .silting import mutate_silting, torsion_class_from_silting
from .torsion import (IndSet, TorsionPair, check_triple, cogen_membership,
                      pairs_from_triple, semibrick_wide_check,
                      triple_from_pairs)

log = logging.getLogger("torsmut")


@dataclass
class SessionConfig:
    family: str | None
    algebra_path: str | None
    p: int
    dim_bound: int
    fmt: str | None
    threads: int
    p_given: bool = False

    def algebra(self):
        if self.algebra_path:
            try:
                with open(self.algebra_path) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise TorsmutError(f"cannot read algebra file: {exc}") from exc
            return QuiverAlgebra.from_json(data, self.p if self.p_given else None)
        return builtin_algebra(self.family or "a2", self.p)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torsmut", description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--family", help="built-in algebra: a<n>, an:<n>, nakayama:<n>,<l>, kronecker, point")
    src.add_argument("--algebra", dest="algebra_path", help="algebra definition JSON file")
    ap.add_argument("--p", type=int, default=None, help="field size (prime, default 2)")
    ap.add_argument("--bound", type=int, default=None, help="total-dimension bound for indecomposables")
    ap.add_argument("--format", dest="fmt", choices=["json", "dot", "text"], default=None)
    ap.add_argument("--subspace-cap", type=int, default=None)
    ap.add_argument("--ext-cap", type=int, default=None)
    ap.add_argument("--hom-cap", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="algebra commands")
    alg.add_subparsers(dest="action", required=True).add_parser("check", help="validate and print dimensions")

    ind = sub.add_parser("ind", help="indecomposable modules")
    ind.add_subparsers(dest="action", required=True).add_parser("list", help="list indecomposables with ids")

    tors = sub.add_parser("tors", help="torsion classes")
    tsub = tors.add_subparsers(dest="action", required=True)
    lat = tsub.add_parser("lattice", help="enumerate torsion classes")
    lat.add_argument("--dot", nargs="?", const="-", default=None, help="write DOT (stdout if no path)")
    lat.add_argument("--json", nargs="?", const="-", default=None, help="write JSON (stdout if no path)")
    tsub.add_parser("labels", help="brick labels of the Hasse covers")

    mut = sub.add_parser("mutations", help="right mutations of a torsion class")
    mut.add_argument("--from", dest="source", type=int, required=True, help="torsion class id")

    sil = sub.add_parser("silting", help="two-term silting objects")
    ssub = sil.add_subparsers(dest="action", required=True)
    ssub.add_parser("list", help="silting object of every torsion class")
    sm = ssub.add_parser("mutate", help="irreducible mutation at one summand")
    sm.add_argument("--at", type=int, required=True, help="summand index")
    sm.add_argument("--dir", choices=["left", "right"], required=True)
    sm.add_argument("--from", dest="source", type=int, default=None,
                    help="torsion class id of the starting object (default: the algebra)")

    ver = sub.add_parser("verify", help="exhaustive checks")
    ver.add_argument("what", choices=["theorem-c", "triples"])

    kd = sub.add_parser("kronecker-demo", help="irreducible mutations between cogenerated Kronecker pairs")
    kd.add_argument("--n", type=int, default=1)
    kd.add_argument("--bound", dest="demo_bound", type=int, default=None)
    return ap


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        out.write(str(obj) + "\n")


def _write(path: str, text: str, out) -> None:
    if path == "-":
        out.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _ids(s: IndSet) -> str:
    return "{" + ",".join(map(str, s.sorted())) + "}"


def _lattice(cfg: SessionConfig):
    ind = enumerate_indecomposables(cfg.algebra(), cfg.dim_bound)
    return enumerate_torsion_classes(ind)


def cmd_algebra(cfg, args, out) -> int:
    A = cfg.algebra()
    lines = [
        f"vertices: {' '.join(A.vertices)}",
        f"arrows: {' '.join(f'{a.name}:{a.source}->{a.target}' for a in A.arrows) or '-'}",
        f"relations: {' '.join('*'.join(r) for r in A.relations) or '-'}",
        f"field: F_{A.p}",
        f"dimension: {A.dim}",
        f"paths: {' '.join(str(q) for q in A.path_basis)}",
    ]
    for v in A.vertices:
        lines.append(f"P({v}) dims: {homext.projective(A, v).dims}")
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_ind(cfg, args, out) -> int:
    ind = enumerate_indecomposables(cfg.algebra(), cfg.dim_bound)
    if (cfg.fmt or "json") == "json":
        data = [dict(id=k, **X.to_json()) for k, X in enumerate(ind)]
        _emit(data, "json", out)
    else:
        for k, X in enumerate(ind):
            out.write(f"{k}: dims {X.dims}\n")
        out.write(f"complete: {'yes' if ind.complete else 'no'}\n")
    if not ind.complete:
        log.warning("list is a bounded slice: indecomposables beyond the bound exist or were not excluded")
    return 0


def cmd_tors(cfg, args, out) -> int:
    L = _lattice(cfg)
    if args.action == "labels":
        for c in L.covers:
            out.write(f"{c.lower} -> {c.upper}: brick {c.label} dims {L.ambient[c.label].dims}\n")
        return 0
    fmt = cfg.fmt or "text"
    if args.dot is not None:
        _write(args.dot, L.to_dot(), out)
    if args.json is not None:
        _write(args.json, L.dumps() + "\n", out)
    if args.dot is None and args.json is None:
        if fmt == "dot":
            out.write(L.to_dot())
        elif fmt == "json":
            out.write(L.dumps() + "\n")
        else:
            for k, c in enumerate(L.classes):
                out.write(f"{k}: {_ids(c)}\n")
            out.write(f"{len(L.classes)} torsion classes, {len(L.covers)} covers\n")
    return 0


def cmd_mutations(cfg, args, out) -> int:
    L = _lattice(cfg)
    if not 0 <= args.source < len(L.classes):
        raise TorsmutError(f"class id {args.source} out of range")
    u = L.pair(args.source)
    muts = right_mutations_of(u, L)
    top = mutation_interval_top(u, L)
    for m in muts:
        out.write(f"{_ids(m.subset)} -> class {L.index_of(m.t_class)} {_ids(m.t_class)}"
                  f"{'' if m.verified else ' (NOT a mutation)'}\n")
    out.write(f"interval top: {', '.join(_ids(t) for t in top.ends)}{'' if top.unique else ' (not unique)'}\n")
    return 0 if all(m.verified for m in muts) and top.unique else 1


def cmd_silting(cfg, args, out) -> int:
    L = _lattice(cfg)
    fmt = cfg.fmt or "json"
    if args.action == "list":
        data = []
        for k in range(len(L.classes)):
            s = L.silting(k)
            data.append({"class": k, "torsion_class": L.classes[k].sorted(), "summands": s.to_json()})
        if fmt == "json":
            _emit(data, "json", out)
        else:
            for d in data:
                out.write(f"{d['class']}: " + "; ".join(str(s["g_vector"]) for s in d["summands"]) + "\n")
        return 0
    start = args.source if args.source is not None else len(L.classes) - 1
    if not 0 <= start < len(L.classes):
        raise TorsmutError(f"class id {start} out of range")
    sigma = L.silting(start)
    tau = mutate_silting(sigma, args.at, args.dir, L)
    k = L.index_of(torsion_class_from_silting(tau, L.ambient))
    data = {"from": start, "to": k, "summands": tau.to_json()}
    if fmt == "json":
        _emit(data, "json", out)
    else:
        out.write(f"class {start} -> class {k}: " + "; ".join(str(s["g_vector"]) for s in data["summands"]) + "\n")
    return 0


def cmd_verify(cfg, args, out) -> int:
    L = _lattice(cfg)
    if args.what == "theorem-c":
        rep = verify_theorem_c(L)
        for v in rep.violations:
            out.write(f"violation: {json.dumps(v, sort_keys=True)}\n")
        out.write(rep.summary() + "\n")
        return 0 if not rep.violations else 1
    bad = 0
    pairs = L.nested_pairs(strict=False)
    for i, j in pairs:
        u, t = L.pair(i), L.pair(j)
        tr = triple_from_pairs(u, t)
        u2, t2 = pairs_from_triple(tr)
        problems = check_triple(tr)
        if u2.key() != u.key() or t2.key() != t.key() or problems:
            bad += 1
            out.write(f"violation: pair ({i}, {j}) {problems[:1]}\n")
    out.write(f"{len(pairs)} nested pairs, {bad} violations\n")
    return 0 if not bad else 1


def cmd_kronecker(cfg, args, out) -> int:
    A = cfg.algebra()
    if A.n_vertices != 2 or sorted((a.source, a.target) for a in A.arrows) != [("1", "2"), ("1", "2")] or A.relations:
        raise TorsmutError("kronecker-demo needs the Kronecker algebra (--family kronecker)")
    bound = args.demo_bound or cfg.dim_bound
    n = args.n
    if n < 0:
        raise TorsmutError("--n must be >= 0")
    need = 2 * (n + 2) + 1
    if need > bound:
        raise TorsmutError(f"P_{n + 2} has total dimension {need}, above the bound {bound}")
    ind = enumerate_indecomposables(A, bound)
    P = {k: kronecker_preprojective(A, k) for k in (n, n + 1, n + 2)}

    def pair(k):
        return TorsionPair.from_predicates(ind, lambda X: hom_dim(X, P[k]) == 0,
                                           lambda X: cogen_membership(X, P[k]))

    t0, t1, t2 = pair(n), pair(n + 1), pair(n + 2)
    v1 = check_mutation(t1, t0, cross_check=False)
    v2 = check_mutation(t2, t0, cross_check=False)
    ids = {k: ind.find(P[k]) for k in P}
    sb = IndSet.of(ind, [ids[n + 1], ids[n + 2]])
    w = semibrick_wide_check(sb)
    out.write(f"slice: {len(ind)} indecomposables of total dimension <= {bound} (complete: {'yes' if ind.complete else 'no'})\n")
    out.write(f"P_{n + 1} = id {ids[n + 1]}, P_{n + 2} = id {ids[n + 2]}\n")
    out.write(f"wide subcategory of [t_{n + 1}, t_{n}]: {_ids(v1.s_set)} semibrick {_ids(v1.semibrick)}\n")
    out.write(f"irreducible: {'yes' if v1.is_irreducible else 'no'}\n")
    out.write(f"{{P_{n + 1}, P_{n + 2}}} wide: {'yes' if w.wide else 'no'}\n")
    out.write(f"pair-skip t_{n + 2}->t_{n} wide: {'yes' if v2.is_mutation else 'no'}\n")
    expected = v1.is_irreducible and v1.semibrick.ids == {ids[n + 1]} and not w.wide and not v2.is_mutation
    return 0 if expected else 1


COMMANDS = {
    "algebra": cmd_algebra,
    "ind": cmd_ind,
    "tors": cmd_tors,
    "mutations": cmd_mutations,
    "silting": cmd_silting,
    "verify": cmd_verify,
    "kronecker-demo": cmd_kronecker,
}


def _threads() -> int:
    raw = os.environ.get("TORSMUT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise TorsmutError(f"TORSMUT_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise TorsmutError("TORSMUT_THREADS must be >= 1")
    return n


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        p = args.p if args.p is not None else linalg.DEFAULT_P
        if not linalg.is_prime(p):
            raise TorsmutError(f"--p {p} is not prime")
        bound = args.bound if args.bound is not None else DEFAULT_BOUND
        if bound < 1:
            raise TorsmutError("--bound must be positive")
        for name, val in (("subspace", args.subspace_cap), ("ext", args.ext_cap), ("hom", args.hom_cap)):
            if val is not None and val < 1:
                raise TorsmutError(f"--{name}-cap must be positive")
        saved = (linalg.SUBSPACE_CAP, homext.EXT_CLASS_CAP, reps.HOM_ENUM_CAP, silting.END_ENUM_CAP)
        if args.subspace_cap:
            linalg.SUBSPACE_CAP = args.subspace_cap
        if args.ext_cap:
            homext.EXT_CLASS_CAP = args.ext_cap
        if args.hom_cap:
            reps.HOM_ENUM_CAP = args.hom_cap
            silting.END_ENUM_CAP = min(silting.END_ENUM_CAP, args.hom_cap)
        try:
            # accepted as a hint; all computation is serial and deterministic
            threads = _threads()
            cfg = SessionConfig(args.family, args.algebra_path, p, bound, args.fmt, threads, args.p is not None)
            return COMMANDS[args.command](cfg, args, out)
        finally:
            linalg.SUBSPACE_CAP, homext.EXT_CLASS_CAP, reps.HOM_ENUM_CAP, silting.END_ENUM_CAP = saved
    except TorsmutError as exc:
        sys.stderr.write(f"torsmut: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
