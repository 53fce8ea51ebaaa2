"""Command line front end: ``hoffman {bounds,exact,verify,simulate,gen}``.

Every subcommand writes JSON lines (one object per record, each with
``"v": "v1"``) to standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterator, TextIO

from . import bounds, clustering, coloring, covers, rounding, vector_coloring, verify
from .graph import (
    GraphFormatError,
    WeightedGraph,
    all_graphs,
    emit_graph6,
    emit_weighted_edgelist,
    generate,
    parse_dimacs,
    parse_graph6,
    parse_weighted_edgelist,
)


def _open(path: str) -> TextIO:
    return sys.stdin if path == "-" else open(path, encoding="ascii")


def read_graphs(path: str, fmt: str) -> Iterator[tuple[str, WeightedGraph | GraphFormatError]]:
    """Yield ``(id, graph)``; unparsable graph6 lines yield ``(id, error)`` instead."""
    name = "stdin" if path == "-" else Path(path).name
    with _open(path) as fh:
        if fmt == "graph6":
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    yield f"{name}:{lineno}", parse_graph6(line)
                except GraphFormatError as exc:
                    yield f"{name}:{lineno}", GraphFormatError(f"line {lineno}: {exc}")
            return
        text = fh.read()
    try:
        g = parse_dimacs(text) if fmt == "dimacs" else parse_weighted_edgelist(text)
    except GraphFormatError as exc:
        yield name, exc
        return
    yield name, g


def _emit(obj: dict, out: TextIO) -> None:
    out.write(verify.dumps(obj) + "\n")


def _read_or_report(args, out: TextIO, err: TextIO) -> Iterator[tuple[str, WeightedGraph]]:
    args._parse_errors = 0
    for gid, g in read_graphs(args.input, args.format):
        if isinstance(g, Exception):
            args._parse_errors += 1
            err.write(f"{gid}: {g}\n")
            continue
        yield gid, g


def cmd_bounds(args, out: TextIO, err: TextIO) -> int:
    improve = tuple(args.improve_w) if args.improve_w else None
    for gid, g in _read_or_report(args, out, err):
        rep = bounds.bound_report(gid, g, args.alpha, args.lam, improve)
        _emit(rep.to_json(), out)
    return 1 if args._parse_errors else 0


def _write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return str(path)


def _named(base: Path, suffix: str) -> Path:
    return base.parent / (base.name + suffix)


def _safe(gid: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in gid)


def cmd_exact(args, out: TextIO, err: TextIO) -> int:
    outdir = Path(args.out)
    failed = False
    for gid, g in _read_or_report(args, out, err):
        base = outdir / _safe(gid)
        unit = g.unweighted()
        rec = {"v": "v1", "graph": gid}
        if args.chi:
            try:
                k, col = coloring.chromatic_number(unit)
                ok = col.is_proper(unit) and len(set(col.color)) == k
                path = _write(_named(base, ".coloring.json"), json.dumps({"k": k, "color": list(col.color)}))
                _emit({**rec, "parameter": "chi", "value": k, "certificate": path, "verified": ok, "status": "ok"}, out)
                failed |= not ok
            except coloring.CapExceeded:
                _emit({**rec, "parameter": "chi", "status": "skipped(cap)"}, out)
        if args.chiv:
            if g.m == 0:
                _emit({**rec, "parameter": "chi_v", "k_upper": 1.0, "k_lower": 1.0, "status": "ok"}, out)
            else:
                res = vector_coloring.solve_vector_chromatic(unit, restarts=args.restarts, seed=args.seed)
                path = _write(_named(base, ".vectors.tsv"), vector_coloring.dump_assignment(res.assignment))
                check = vector_coloring.verify_vector_coloring(
                    unit, vector_coloring.load_assignment(Path(path).read_text()), res.k_upper + 1e-9
                )
                _emit({
                    **rec, "parameter": "chi_v", "k_upper": res.k_upper, "k_lower": res.k_lower,
                    "max_edge_ip": res.max_edge_ip, "rank": res.rank, "certificate": path,
                    "verified": check.passed, "status": "ok",
                }, out)
                failed |= not check.passed
        if args.clustering is not None:
            lam = args.clustering
            try:
                k, cl = clustering.clustering_number_exact(g, lam)
                ok = clustering.is_clustering(g, cl, lam)
                path = _write(_named(base, f".clustering-{lam!r}.json"), json.dumps({
                    "lambda": lam, "k": k, "assignment": list(cl.assignment),
                    "top_eigenvalues": list(cl.top_eigenvalues),
                }))
                _emit({**rec, "parameter": "clustering", "lambda": lam, "value": k,
                       "certificate": path, "verified": ok, "status": "ok"}, out)
                failed |= not ok
            except coloring.CapExceeded:
                _emit({**rec, "parameter": "clustering", "lambda": lam, "status": "skipped(cap)"}, out)
            except clustering.InfeasibleThreshold as exc:
                _emit({**rec, "parameter": "clustering", "lambda": lam, "status": "infeasible", "reason": str(exc)}, out)
        if args.covering is not None:
            psi, alpha = args.covering[0], float(args.covering[1])
            try:
                k, fam = covers.covering_number_exact(unit, psi, alpha, mode=args.mode)
                rep = covers.verify_cover_family(unit, fam, psi, alpha, args.mode)
                data = {"psi": psi, "alpha": alpha, "mode": args.mode, **fam.to_json()}
                path = _write(_named(base, f".family-{psi}-{alpha!r}.json"), json.dumps(data))
                _emit({**rec, "parameter": "covering", "psi": psi, "alpha": alpha, "mode": args.mode,
                       "value": k, "certificate": path, "verified": rep.passed, "status": "ok"}, out)
                failed |= not rep.passed
            except coloring.CapExceeded:
                _emit({**rec, "parameter": "covering", "psi": psi, "alpha": alpha, "status": "skipped(cap)"}, out)
    return 1 if failed or args._parse_errors else 0


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    if args.corpus == "default":
        corpus = verify.default_corpus(args.seed)
    else:
        with _open(args.corpus) as fh:
            corpus = verify.load_corpus(json.load(fh))
    only = None if not args.only else [s.strip() for s in args.only.split(",")]
    if only:
        unknown = set(only) - set(verify.CHECKS)
        if unknown:
            err.write(f"unknown checks: {sorted(unknown)}\n")
            return 2
    records = verify.run_corpus(corpus, args.tolerance, only)
    for r in records:
        _emit(r.to_json(), out)
    return 1 if any(r.status == "violated" for r in records) else 0


def cmd_simulate(args, out: TextIO, err: TextIO) -> int:
    graphs = [g for _, g in _read_or_report(args, out, err)]
    if len(graphs) != 1:
        err.write("simulate needs exactly one graph\n")
        return 2
    g = graphs[0].unweighted()
    with open(args.family, encoding="utf-8") as fh:
        data = json.load(fh)
    psi, alpha = data["psi"], data["alpha"]
    mode = data.get("mode", covers.BudgetMode.PER_SUBSET.value)
    fam = covers.CoverFamily.from_json(g, data, psi)
    rep = covers.verify_cover_family(g, fam, psi, alpha, mode)
    if not rep.passed:
        err.write("invalid family:\n" + "\n".join(rep.violations) + "\n")
        _emit({"v": "v1", "status": "invalid-family", "violations": rep.violations}, out)
        return 1
    stats = rounding.simulate(g, fam, args.trials, args.seed, alpha)
    outcome = rounding.derandomize(g, fam)
    bound = str(covers.as_fraction(alpha) * g.n)
    _emit({"v": "v1", "status": "ok", **stats,
           "derandomized": {"choice": list(outcome.choice), "bad_edges": outcome.bad_edges,
                            "alpha_n": bound}}, out)
    if args.histogram_csv:
        lines = ["bad_edges,count"] + [f"{k},{c}" for k, c in enumerate(stats["histogram"])]
        _write(Path(args.histogram_csv), "\n".join(lines) + "\n")
    return 0


def cmd_gen(args, out: TextIO, err: TextIO) -> int:
    if args.family[0] == "enumerate":
        ns = range(1, int(args.family[1]) + 1)
        for n in ns:
            for g in all_graphs(n):
                out.write(emit_graph6(g) + "\n")
        return 0
    g = generate(" ".join(args.family))
    out.write(emit_weighted_edgelist(g) if g.is_weighted else emit_graph6(g) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hoffman", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("input", help="graph file, or - for standard input")
        sp.add_argument("--format", choices=("graph6", "dimacs", "edgelist"), default="graph6")
        sp.add_argument("--weights", dest="format", action="store_const", const="edgelist",
                        help="input is a weighted edge list (same as --format edgelist)")

    b = sub.add_parser("bounds", help="spectral lower bounds per graph")
    add_input(b)
    b.add_argument("--alpha", type=float)
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--improve-w", nargs=2, type=int, metavar=("ITERS", "SEED"))
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("exact", help="exact oracles with certificates")
    add_input(e)
    e.add_argument("--chi", action="store_true")
    e.add_argument("--chiv", action="store_true")
    e.add_argument("--clustering", type=float, metavar="LAMBDA")
    e.add_argument("--covering", nargs=2, metavar=("PSI", "ALPHA"))
    e.add_argument("--mode", choices=[m.value for m in covers.BudgetMode], default="per-subset")
    e.add_argument("--restarts", type=int, default=3)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", default="certificates")
    e.set_defaults(func=cmd_exact)

    v = sub.add_parser("verify", help="check every bound against its oracle on a corpus")
    v.add_argument("--corpus", default="default", help="'default' or a corpus JSON file")
    v.add_argument("--tolerance", type=float, default=verify.DEFAULT_TOLERANCE)
    v.add_argument("--only", help=f"comma-separated subset of {','.join(verify.CHECKS)}")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="random and derandomized rounding through a cover family")
    add_input(s)
    s.add_argument("--family", required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--histogram-csv")
    s.set_defaults(func=cmd_simulate)

    g = sub.add_parser("gen", help="emit a generated graph, or 'enumerate N' for all graphs up to N vertices")
    g.add_argument("family", nargs="+")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args, out or sys.stdout, err or sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
