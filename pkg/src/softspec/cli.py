"""Command-line entry point: ``softspec <subcommand> ...``.

Exit status: 0 when everything checked passes, 1 on a verification failure,
2 on a usage or input error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import landscape, report
from .catalog import catalog_by_id, catalog_ids_for
from .graph import (Graph, GraphError, chain, clique, complete_multipartite, cycle,
                    enumerate_connected_graphs, parse_graph_file, star, to_dot)
from .qfield import QuadraticNumber
from .spectra import SOFT_TOL, VERIFY_TOL, SpectrumError, rational_eigenspace, soft_nodes
from .subgraph import SubgraphError, classify_case, dichotomy_check
from .tables import TABLE_TOL, TableError
from .transforms import TransformError, run_script

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_N = landscape.MAX_FAMILY_N


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    fmt: str = "text"
    lam: str | None = None
    n_max: int = 6
    verify_tol: float = VERIFY_TOL
    soft_tol: float = SOFT_TOL
    table_tol: float = TABLE_TOL
    threads: int = 1
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------- input helpers

_NAMED = [
    (re.compile(r"^K(\d+)$"), lambda m: clique(int(m.group(1)))),
    (re.compile(r"^S(\d+)$"), lambda m: star(int(m.group(1)))),
    (re.compile(r"^Ch(\d+)$"), lambda m: chain(int(m.group(1)))),
    (re.compile(r"^Cy(\d+)$"), lambda m: cycle(int(m.group(1)))),
    (re.compile(r"^K(\d+(?:,\d+)+)$"), lambda m: complete_multipartite([int(t) for t in m.group(1).split(",")])),
]


def load_graph(spec: str) -> Graph:
    """A graph file path, a catalog id such as 6.35, or a name: K4, S5, Ch3, Cy6, K2,3."""
    p = Path(spec)
    if p.is_file():
        return parse_graph_file(p.read_text("utf-8")).with_label(p.stem)
    cat = catalog_by_id()
    if spec in cat:
        return cat[spec].graph().with_label(spec)
    for rx, make in _NAMED:
        m = rx.match(spec)
        if m:
            return make(m)
    raise UsageError(f"cannot resolve graph {spec!r} (not a file, catalog id or known name)")


_QUAD = re.compile(r"^\(?\s*([+-]?\d+)?\s*([+-])?\s*(\d*)\s*\*?\s*sqrt\((\d+)\)\s*\)?\s*(?:/\s*(\d+))?$")


def parse_exact(text: str):
    """An int, a fraction p/q, or (p +- q*sqrt(d))/r."""
    s = text.strip()
    try:
        v = Fraction(s)
        return int(v) if v.denominator == 1 else v
    except (ValueError, ZeroDivisionError):
        pass
    m = _QUAD.match(s)
    if not m:
        raise UsageError(f"cannot read eigenvalue {text!r}")
    p, sign, q, d, r = m.groups()
    r = int(r) if r else 1
    q = int(q) if q else 1
    if sign == "-":
        q = -q
    return QuadraticNumber(Fraction(int(p or 0), r), Fraction(q, r), int(d))


def parse_vector_arg(text: str) -> tuple:
    parts = [t for t in re.split(r"[,\s]+", text.strip().strip("()")) if t]
    try:
        return tuple(Fraction(t) for t in parts)
    except ValueError:
        raise UsageError(f"cannot read vector {text!r}") from None


def parse_vertices(text: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError:
        raise UsageError(f"cannot read vertex list {text!r}") from None


# ---------------------------------------------------------------- output

def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def _text(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, QuadraticNumber) and v.b == 0:
        v = v.a
    return str(v)


def _need_lambda(cfg: RunConfig):
    if cfg.lam is None:
        raise UsageError(f"{cfg.command} needs --lambda")
    return parse_exact(cfg.lam)


# ---------------------------------------------------------------- subcommands

def cmd_spectrum(cfg: RunConfig) -> int:
    g = load_graph(cfg.inputs[0])
    doc = report.spectrum_report(g)
    if cfg.fmt == "json":
        _write(cfg, report.dumps(doc))
    elif cfg.fmt == "dot":
        _write(cfg, to_dot(g, name=g.label or "G"))
    else:
        lines = [f"graph {g.label or '?'}: n={g.n} m={g.m}" +
                 (f" catalog {', '.join(doc['graph']['catalog_ids'])}" if doc["graph"].get("catalog_ids") else ""),
                 f"characteristic polynomial (low to high): {doc['char_poly']}"]
        for e in doc["eigenvalues"]:
            lines.append(f"  {e['text']:<22} x{e['multiplicity']}  [{e['kind']}]  ~{e['approx']:.10f}")
        lines.append("numeric (Jacobi): " + ", ".join(f"{v:.10f}" for v in doc["numeric"]))
        for s in doc["soft"]:
            lines.append(f"soft vertices for {s['eigenvalue']}: {s['soft_vertices']}")
        _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_soft(cfg: RunConfig) -> int:
    g = load_graph(cfg.inputs[0])
    lam = _need_lambda(cfg)
    rep = soft_nodes(g, lam, cfg.soft_tol)
    doc = report.soft_report_json(rep)
    if cfg.fmt == "json":
        _write(cfg, report.dumps(doc))
    elif cfg.fmt == "dot":
        wit = rep.witnesses[rep.soft[0]] if rep.soft else None
        _write(cfg, to_dot(g, values=wit, name=g.label or "G", bold=rep.soft))
    else:
        lines = [f"lambda={cfg.lam} multiplicity={rep.multiplicity} exact={rep.exact}",
                 f"soft vertices: {list(rep.soft)}"]
        for s in rep.soft:
            lines.append(f"  {s}: ({', '.join(_text(v) for v in rep.witnesses[s])})")
        _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _default_vector(g: Graph, lam) -> tuple:
    if isinstance(lam, int):
        rep = soft_nodes(g, lam)
        if rep.soft:
            return tuple(rep.witnesses[rep.soft[0]])
        return tuple(rational_eigenspace(g, lam)[0])
    raise UsageError("non-integer eigenvalues need an explicit --vector")


def cmd_transform(cfg: RunConfig) -> int:
    g = load_graph(cfg.inputs[0])
    lam = _need_lambda(cfg)
    script_arg = cfg.inputs[1]
    p = Path(script_arg)
    script = p.read_text("utf-8") if p.is_file() else script_arg.replace(";", "\n")
    x = parse_vector_arg(cfg.extra["vector"]) if cfg.extra.get("vector") else _default_vector(g, lam)
    records = run_script(g, lam, x, script)
    doc = report.transforms_report(records)
    if cfg.fmt == "json":
        _write(cfg, report.dumps(doc))
    elif cfg.fmt == "dot":
        last = records[-1] if records else None
        gg, vec = (last.graph, last.vector) if last else (g, x)
        _write(cfg, to_dot(gg, values=[str(v) for v in vec], name="result",
                           bold=[k + 1 for k, v in enumerate(vec) if v == 0]))
    else:
        lines = [f"start: n={g.n} lambda={_text(lam)} x=({', '.join(_text(v) for v in x)})"]
        for k, r in enumerate(records, 1):
            lines.append(f"{k}. {r.kind} {r.params}: n={r.graph.n} m={r.graph.m} lambda {r.input_lam} -> {r.lam} "
                         f"verified={r.verified}" + (f" flags={list(r.flags)}" if r.flags else ""))
            lines.append(f"   x = ({', '.join(_text(v) for v in r.vector)})")
        _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if doc["all_verified"] else EXIT_FAIL


def cmd_enumerate(cfg: RunConfig) -> int:
    n = cfg.extra.get("n") or cfg.n_max
    if not 1 <= n <= MAX_N:
        raise UsageError(f"n must be in 1..{MAX_N}")
    graphs = enumerate_connected_graphs(n)
    rows = [{"n": g.n, "m": g.m, "edges": [list(e) for e in g.edges], "catalog_ids": list(catalog_ids_for(g))}
            for g in graphs]
    if cfg.fmt == "json":
        _write(cfg, json.dumps({"n": n, "count": len(rows), "graphs": rows}, indent=2) + "\n")
    elif cfg.fmt == "dot":
        _write(cfg, "".join(to_dot(g, name=f"g{k}") for k, g in enumerate(graphs, 1)))
    else:
        lines = [f"{len(rows)} connected graphs on {n} vertices"]
        for r in rows:
            lines.append(f"{','.join(r['catalog_ids']) or '-':<12} m={r['m']:<3} {r['edges']}")
        _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_family(cfg: RunConfig) -> int:
    lam = _need_lambda(cfg)
    if not isinstance(lam, int):
        raise UsageError("family needs an integer --lambda")
    if not 1 <= cfg.n_max <= MAX_N:
        raise UsageError(f"--n-max must be in 1..{MAX_N}")
    fam = landscape.lambda_soft_family(lam, cfg.n_max)
    edges = landscape.discover_edges(fam, cfg.n_max) if fam and not cfg.extra.get("no_edges") else []
    _write(cfg, landscape.emit_landscape(fam, edges, cfg.fmt if cfg.fmt != "text" else "text", lam))
    return EXIT_OK


def cmd_verify_tables(cfg: RunConfig) -> int:
    from .tables import bundled_ledger, format_ledger, summary_lines, verify_appendix_tables
    rep = verify_appendix_tables(tol=cfg.table_tol)
    ledger = format_ledger(rep)
    matches = ledger == bundled_ledger()
    if cfg.extra.get("write_ledger"):
        Path(cfg.extra["write_ledger"]).write_text(ledger, "utf-8")
    if cfg.fmt == "json":
        doc = {"counts": rep.counts(), "totals": rep.totals(), "covered": rep.covered(),
               "ledger_matches_committed": matches,
               "rows": [{"ref": r.ref, "id": r.catalog_id, "status": r.status, "flags": r.flags,
                         "diagnosis": r.diagnosis} for r in rep.rows]}
        _write(cfg, json.dumps(doc, indent=2) + "\n")
    else:
        lines = summary_lines(rep)
        lines.append(f"every row exact-pass or diagnosed in the ledger: {rep.covered()}")
        lines.append(f"regenerated ledger matches the committed ledger: {matches}")
        if not matches:
            import difflib
            lines.extend(difflib.unified_diff(bundled_ledger().splitlines(), ledger.splitlines(),
                                              "committed", "regenerated", lineterm=""))
        _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if rep.covered() and matches else EXIT_FAIL


def cmd_subgraph(cfg: RunConfig) -> int:
    g2 = load_graph(cfg.inputs[0])
    if not cfg.extra.get("sub"):
        raise UsageError("subgraph needs --sub")
    sub = parse_vertices(cfg.extra["sub"])
    lam = _need_lambda(cfg)
    X = parse_vector_arg(cfg.extra["vector"]) if cfg.extra.get("vector") else None
    analyses = classify_case(g2, sub, lam, X)
    dich = dichotomy_check(g2, sub, lam)
    doc = report.subgraph_report(analyses, dich)
    if cfg.fmt == "json":
        _write(cfg, report.dumps(doc))
    else:
        lines = []
        for a in doc["analyses"]:
            lines.append(f"G order {a['order_g']} | G' order {a['order_gp']} | p={a['p']} p'={a['p_prime']}")
            lines.append(f"  Delta = {a['delta']}")
            lines.append(f"  X = {a['X']}  case {a['case']}  lambda' = {a['lambda_prime']}  X' = {a['X_prime']}")
            for note in a["notes"]:
                lines.append(f"  note: {note}")
            if a["falsification"]:
                lines.append(f"  {a['falsification']}")
        lines.append(f"restriction dichotomy holds: {doc['dichotomy']['holds']}")
        _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_reproduce(cfg: RunConfig) -> int:
    from .reproduce import run_all, summary_text
    only = parse_vertices(cfg.extra["only"]) if cfg.extra.get("only") else None
    results = run_all(cfg.threads, only)
    if cfg.fmt == "json":
        doc = [{"criterion": r.number, "title": r.title, "passed": r.passed, "details": r.details} for r in results]
        _write(cfg, json.dumps(doc, indent=2) + "\n")
    else:
        _write(cfg, summary_text(results))
    for r in results:
        print(f"criterion {r.number}: {r.seconds:.2f} s", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {
    "spectrum": cmd_spectrum,
    "soft": cmd_soft,
    "transform": cmd_transform,
    "enumerate": cmd_enumerate,
    "family": cmd_family,
    "verify-tables": cmd_verify_tables,
    "subgraph": cmd_subgraph,
    "reproduce-paper": cmd_reproduce,
}


# ---------------------------------------------------------------- argparse

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--lambda", dest="lam", help="eigenvalue: 3, 5/2 or (7+sqrt(5))/2")
    common.add_argument("--n-max", type=int, default=6)
    common.add_argument("--tol", type=float, help="soft-zero tolerance for numeric eigenvectors "
                        f"(default {SOFT_TOL:g}); for verify-tables the printed-decimal tolerance "
                        f"(default {TABLE_TOL:g})")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="softspec", description="Exact Laplacian spectra and soft-node tools.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("spectrum", parents=[common], help="exact and numeric spectrum of a graph")
    s.add_argument("graph")
    s = sub.add_parser("soft", parents=[common], help="soft vertices for one eigenvalue")
    s.add_argument("graph")
    s = sub.add_parser("transform", parents=[common], help="apply a transform script")
    s.add_argument("graph")
    s.add_argument("script", help="script file, or inline lines separated by ';'")
    s.add_argument("--vector", help="starting eigenvector, e.g. 1,0,-1")
    s = sub.add_parser("enumerate", parents=[common], help="connected graphs on n vertices")
    s.add_argument("--n", type=int)
    s = sub.add_parser("family", parents=[common], help="lambda-soft family with transform edges")
    s.add_argument("--no-edges", action="store_true")
    s = sub.add_parser("verify-tables", parents=[common], help="check the bundled soft-node tables")
    s.add_argument("--write-ledger", metavar="PATH")
    s = sub.add_parser("subgraph", parents=[common], help="Schur-complement analysis of an embedding")
    s.add_argument("graph")
    s.add_argument("--sub", help="vertices of the embedded graph, e.g. 1,2,3")
    s.add_argument("--vector", help="eigenvector of the embedded graph (default: whole eigenspace)")
    s = sub.add_parser("reproduce-paper", parents=[common], help="run every acceptance check")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = [getattr(ns, k) for k in ("graph", "script") if getattr(ns, k, None) is not None]
    cfg = RunConfig(ns.command, inputs, ns.output, ns.format, ns.lam, ns.n_max, threads=max(1, ns.threads))
    if ns.tol is not None:
        if ns.tol <= 0:
            raise UsageError("--tol must be positive")
        cfg.soft_tol = ns.tol
        cfg.table_tol = ns.tol
    if not 1 <= cfg.n_max <= MAX_N:
        raise UsageError(f"--n-max must be in 1..{MAX_N}")
    for k in ("vector", "n", "no_edges", "write_ledger", "sub", "only"):
        if getattr(ns, k, None) is not None:
            cfg.extra[k] = getattr(ns, k)
    return cfg


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return run(config_from_args(ns))
    except UsageError as exc:
        print(f"softspec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, SpectrumError, SubgraphError, TransformError, TableError, ValueError, KeyError) as exc:
        print(f"softspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
