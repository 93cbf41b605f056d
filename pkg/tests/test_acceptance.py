"""Acceptance criteria 1-9, one test each.

Every test runs the shipped check and an independent oracle (numpy, sympy or
networkx), records PASS/FAIL for the terminal summary and prints the same
line. Tolerances and runtime limits are pinned in ``test_pinned_tolerances``.
"""
from __future__ import annotations

import time
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
import sympy

from softspec.catalog import catalog_graph
from softspec.cli import RunConfig
from softspec.graph import all_connected_graphs, cartesian_product, chain, laplacian
from softspec.landscape import lambda_soft_family, minimal_members
from softspec.reproduce import (CHECKS, EXPECTED_CLASS_COUNTS, EXPECTED_MINIMAL, ORACLE_TOL, RUNTIME_LIMITS, TABLE1,
                                TABLE1_TOL, WORKED, closed_form_cases, run_check)
from softspec.spectra import SOFT_TOL, VERIFY_TOL
from softspec.subgraph import split_embedding
from softspec.tables import TABLE_TOL

from conftest import CRITERIA, sympy_laplacian

x = sympy.Symbol("x")


def record(k: int, body) -> None:
    try:
        body()
    except AssertionError:
        CRITERIA[k] = "FAIL"
        print(f"criterion {k}: FAIL")
        raise
    CRITERIA[k] = "PASS"
    print(f"criterion {k}: PASS")


def shipped(k: int, threads: int = 1):
    res = run_check(k, threads)
    for d in res.details:
        print("   ", d)
    return res


def floats(g):
    return np.array([[float(v) for v in r] for r in laplacian(g)])


def test_pinned_tolerances():
    assert TABLE1_TOL == 1e-3
    assert TABLE_TOL == 5e-3
    assert ORACLE_TOL == 1e-9
    assert VERIFY_TOL == 1e-9
    assert SOFT_TOL == 1e-7
    cfg = RunConfig("reproduce-paper")
    assert (cfg.verify_tol, cfg.soft_tol, cfg.table_tol, cfg.n_max) == (1e-9, 1e-7, 5e-3, 6)
    assert RUNTIME_LIMITS == {1: 1.0, 3: 30.0, 5: 120.0}
    assert sorted(CHECKS) == list(range(1, 10))


def test_criterion_1_table_one():
    def body():
        t0 = time.perf_counter()
        res = shipped(1)
        elapsed = time.perf_counter() - t0
        for cid, printed in TABLE1.items():
            ref = np.linalg.eigvalsh(floats(catalog_graph(cid)))
            assert np.max(np.abs(ref - np.array(printed))) <= 1e-3
        # exact complement relation through sympy
        a = sympy_laplacian(catalog_graph("6.35")).eigenvals()
        b = sympy_laplacian(catalog_graph("6.101")).eigenvals()
        assert {sympy.nsimplify(6 - k) for k in a if k != 0} == {sympy.nsimplify(k) for k in b if k != 0}
        assert res.passed and res.seconds < 1.0 and elapsed < 1.0 + 0.5
    record(1, body)


def test_criterion_2_irrational_table():
    def body():
        for cid, (p, d, r) in {"5.16": (3, 2, 1), "5.21": (7, 5, 2), "5.24": (5, 13, 2)}.items():
            ev = sympy_laplacian(catalog_graph(cid)).eigenvals()
            for s in (1, -1):
                target = (p + s * sympy.sqrt(d)) / r
                assert any(sympy.simplify(k - target) == 0 for k in ev)
        closed = {2 - 2 * sympy.cos(sympy.pi * k / 5) for k in range(5)}
        ev = sympy_laplacian(chain(5)).eigenvals()
        assert len(ev) == 5
        assert all(any(sympy.simplify(c - k) == 0 for k in ev) for c in closed)
        res = shipped(2)
        assert res.passed
    record(2, body)


def test_criterion_3_integer_or_irrational():
    def body():
        res = shipped(3, 1)
        graphs = all_connected_graphs(6)
        assert len(graphs) == 143
        bad = 0
        for g in graphs:
            poly = sympy.Poly(sympy_laplacian(g).charpoly(x).as_expr(), x)
            for r in sympy.roots(poly, filter="Q"):
                bad += not r.is_integer
        assert bad == 0
        assert res.passed and res.seconds < 30.0
    record(3, body)


def test_criterion_4_enumeration():
    def body():
        atlas = [0] * 7
        for h in nx.graph_atlas_g()[1:]:
            if h.number_of_nodes() <= 6 and nx.is_connected(h):
                atlas[h.number_of_nodes()] += 1
        assert tuple(atlas[1:]) == EXPECTED_CLASS_COUNTS == (1, 1, 2, 6, 21, 112)
        res = shipped(4)
        assert res.passed
    record(4, body)


def test_criterion_5_transform_suite():
    def body():
        res = shipped(5, 1)
        assert res.passed and res.seconds < 120.0
    record(5, body)


def test_criterion_6_minimal_counts():
    def body():
        res = shipped(6)
        got = tuple(len(minimal_members(lambda_soft_family(lam, 6))) for lam in range(1, 6))
        print("    computed", got, "expected", tuple(EXPECTED_MINIMAL[k] for k in range(1, 6)))
        assert got == (1, 1, 2, 2, 4)
        assert res.passed
    record(6, body)


def test_criterion_7_worked_examples():
    def body():
        third = 1 / 3
        g, sub, _, _ = WORKED["articulation"]
        s = split_embedding(g, sub)
        a, b, c = (np.array([[float(v) for v in r] for r in m]) for m in (s.a, s.b, s.c))
        assert np.allclose(c - b.T @ np.linalg.inv(a) @ b, np.full((3, 3), -third) + np.eye(3))
        g, sub, _, _ = WORKED["link"]
        s = split_embedding(g, sub)
        a, b, c = (np.array([[float(v) for v in r] for r in m]) for m in (s.a, s.b, s.c))
        assert np.allclose(c - b.T @ np.linalg.inv(a) @ b, 0)
        res = shipped(7)
        assert res.passed
    record(7, body)


def test_criterion_8_table_harness():
    def body():
        res = shipped(8)
        assert res.passed
        assert any("rows checked: 282" == d for d in res.details)
    record(8, body)


def test_criterion_9_closed_forms():
    def body():
        worst = 0.0
        for _, pairs, L in closed_form_cases(12):
            ref = np.linalg.eigvalsh(np.array([[float(v) for v in r] for r in L]))
            worst = max(worst, float(np.max(np.abs(np.sort([float(p.value) for p in pairs]) - ref))))
        assert worst <= 1e-9
        grid = cartesian_product(chain(3), chain(3))
        ref = sorted(np.round(np.linalg.eigvalsh(floats(grid)), 9))
        assert np.allclose(ref, sorted(a + b for a in (0, 1, 3) for b in (0, 1, 3)))
        res = shipped(9)
        assert res.passed
    record(9, body)
