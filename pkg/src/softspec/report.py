"""JSON-ready views of spectra, soft-node reports, transform chains and embeddings.

Exact values keep their exactness: a Fraction becomes ``{"num": p, "den": q}``
and a quadratic irrational becomes ``{"a": ..., "b": ..., "d": d}``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .catalog import catalog_ids_for
from .graph import Graph, is_connected, laplacian
from .qfield import QuadraticNumber
from .spectra import (Eigenvalue, SoftNodeReport, classify_spectrum, graph_char_poly, numeric_spectrum,
                      soft_eigenvalues, soft_nodes)
from .subgraph import DeltaAnalysis, DichotomyReport
from .transforms import TransformRecord


def exact_json(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else {"num": x.numerator, "den": x.denominator}
    if isinstance(x, QuadraticNumber):
        if x.b == 0:
            return exact_json(x.a)
        return {"a": exact_json(x.a), "b": exact_json(x.b), "d": x.d}
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Eigenvalue):
        return eigenvalue_json(x)
    if isinstance(x, Graph):
        return graph_json(x)
    if isinstance(x, dict):
        return {str(k): exact_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [exact_json(v) for v in x]
    return str(x)


def dumps(doc: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(exact_json(doc), indent=2, sort_keys=True) + "\n"


def graph_json(g: Graph) -> dict:
    out = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if not g.unit_weighted:
        out["weights"] = [exact_json(w) for w in g.weights]
    if g.label:
        out["label"] = g.label
    ids = catalog_ids_for(g) if g.unit_weighted and g.n <= 6 else ()
    if ids:
        out["catalog_ids"] = list(ids)
    return out


def eigenvalue_json(e: Eigenvalue) -> dict:
    out = {"kind": e.kind, "text": str(e), "multiplicity": e.multiplicity, "approx": round(e.approx, 12)}
    x = e.exact()
    if x is not None:
        out["exact"] = exact_json(x)
    else:
        out["minimal_polynomial"] = list(e.factor.coeffs) if e.factor is not None else None
    return out


def spectrum_report(g: Graph) -> dict:
    connected = is_connected(g)
    spec = classify_spectrum(g, require_connected=False)
    numeric = numeric_spectrum(laplacian(g))
    soft = soft_eigenvalues(g) if connected else []
    return {
        "graph": graph_json(g),
        "connected": connected,
        "char_poly": list(graph_char_poly(g).coeffs),
        "eigenvalues": [eigenvalue_json(e) for e in spec],
        "numeric": [round(p.value, 10) + 0.0 for p in numeric],
        "numeric_max_residual": max((p.residual for p in numeric), default=0.0),
        "soft": [{"eigenvalue": str(e), "soft_vertices": list(s)} for e, s in soft],
    }


def soft_report_json(rep: SoftNodeReport) -> dict:
    return {
        "graph": graph_json(rep.graph),
        "eigenvalue": str(rep.eigenvalue) if isinstance(rep.eigenvalue, Eigenvalue) else exact_json(rep.eigenvalue),
        "multiplicity": rep.multiplicity,
        "exact": rep.exact,
        "soft_vertices": list(rep.soft),
        "witnesses": {str(k): exact_json(v) for k, v in sorted(rep.witnesses.items())},
        "residuals": {str(k): float(v) for k, v in sorted(rep.residuals.items())},
    }


def soft_report(g: Graph, lam) -> dict:
    return soft_report_json(soft_nodes(g, lam))


def transform_json(rec: TransformRecord) -> dict:
    return {
        "kind": rec.kind,
        "params": {k: exact_json(v) if not isinstance(v, Graph) else graph_json(v)
                   for k, v in sorted(rec.params.items())},
        "input_lambda": exact_json(rec.input_lam),
        "lambda": exact_json(rec.lam),
        "shift": exact_json(rec.shift),
        "graph": graph_json(rec.graph),
        "vector": exact_json(rec.vector),
        "verified": rec.verified,
        "flags": list(rec.flags),
    }


def transforms_report(records: Sequence[TransformRecord]) -> dict:
    return {"steps": [transform_json(r) for r in records],
            "all_verified": all(r.verified for r in records)}


def delta_json(d: DeltaAnalysis) -> dict:
    s = d.split
    return {
        "order_g": list(s.order_g),
        "order_gp": list(s.order_gp),
        "p": s.p,
        "p_prime": s.p_prime,
        "delta": exact_json(d.delta),
        "lambda": exact_json(d.lam),
        "X": exact_json(d.X),
        "case": d.case,
        "lambda_prime": exact_json(d.lam_prime) if not isinstance(d.lam_prime, Eigenvalue) else str(d.lam_prime),
        "X_prime": exact_json(d.X_prime),
        "extension_dim": d.extension_dim,
        "falsification": d.falsification,
        "notes": list(d.notes),
    }


def subgraph_report(analyses: Sequence[DeltaAnalysis], dichotomy: DichotomyReport | None = None) -> dict:
    out = {"analyses": [delta_json(d) for d in analyses]}
    if dichotomy is not None:
        out["dichotomy"] = {"holds": dichotomy.holds, "whole_space": dichotomy.whole_space,
                            "violations": exact_json(dichotomy.violations)}
    return out
