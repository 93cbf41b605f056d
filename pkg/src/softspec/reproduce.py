"""Checks that reproduce the reference numbers, one function per criterion.

Each check returns a :class:`CheckResult`. ``summary_text`` renders them
deterministically (timings are kept out of the text; they only feed the
runtime limits).
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .catalog import catalog_by_id, catalog_graph, catalog_ids_for, match_catalog
from .graph import (Graph, build_graph, cartesian_product, chain, complement, cycle, disjoint_union,
                    enumerate_connected_graphs, laplacian)
from .jacobi import jacobi_eigh
from .landscape import lambda_soft_family, minimal_members
from .qfield import QuadraticNumber
from .spectra import (QUADRATIC, classify_spectrum, merris_degree_zero_check,
                      numeric_values, rational_root_violations)
from .special import (bipartite_spectrum, chain_spectrum, clique_spectrum, cycle_spectrum,
                      multipartite_spectrum, star_spectrum)
from .subgraph import (CASE_ART, CASE_LINK, CASE_SHARED, classify_case, dichotomy_check, schur_delta,
                       split_embedding)
from .tables import SCALED_PASS, _fmt_lam, bundled_ledger, format_ledger, verify_appendix_tables
from .transforms import (ADD_GLOBAL_SOFT_NODE, CARTESIAN_PAIR, COMPLEMENT_PAIR, INSERT_SOFT_NODES,
                         MATCHING_TOGGLE, PRESERVING, SHIFTING, TransformError,
                         add_global_soft_node, antisymmetric_pairings, articulation,
                         complement_eigenpair, expansion_shapes, insert_soft_nodes, link_join,
                         link_toggle, matching_toggle, product_eigenpair, regular_expansion,
                         soldering, square_gadget)

TABLE1 = {"6.35": (0, 0.7639, 3, 4, 5, 5.2361), "6.101": (0, 0.7639, 1, 2, 3, 5.2361)}
TABLE1_TOL = 1e-3
ORACLE_TOL = 1e-9
EXPECTED_CLASS_COUNTS = (1, 1, 2, 6, 21, 112)
EXPECTED_MINIMAL = {1: 1, 2: 1, 3: 2, 4: 2, 5: 4}
RUNTIME_LIMITS = {1: 1.0, 3: 30.0, 5: 120.0}


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return f"criterion {self.number}: {'PASS' if self.passed else 'FAIL'} - {self.title}"


def _timed(number: int, fn: Callable[..., CheckResult], *args) -> CheckResult:
    t0 = time.perf_counter()
    res = fn(*args)
    res.seconds = time.perf_counter() - t0
    limit = RUNTIME_LIMITS.get(number)
    if limit is not None:
        ok = res.seconds < limit
        res.details.append(f"runtime within {limit:g} s: {'yes' if ok else 'no'}")
        res.passed = res.passed and ok
    return res


# ---------------------------------------------------------------- 1

def check_table1() -> CheckResult:
    det, ok = [], True
    for cid, printed in TABLE1.items():
        vals = numeric_values(catalog_graph(cid))
        dev = max(abs(a - b) for a, b in zip(sorted(vals), printed))
        ok &= dev <= TABLE1_TOL
        det.append(f"{cid}: spectrum {', '.join(f'{round(v, 12) + 0.0:.4f}' for v in vals)}; max deviation {dev:.1e}")
    g = catalog_graph("6.35")
    comp = complement(g)
    same = catalog_ids_for(comp) == ("6.101",)
    det.append(f"complement of 6.35 is catalog {', '.join(catalog_ids_for(comp))}")
    a = sorted(_exact_nonzero(g), key=float)
    b = sorted((6 - x for x in _exact_nonzero(comp)), key=float)
    rel = len(a) == len(b) and all(x == y for x, y in zip(a, b))
    det.append(f"exact nonzero eigenvalues map lambda -> 6 - lambda: {rel}")
    return CheckResult(1, "spectra of 6.35 and 6.101 and the complement relation", ok and same and rel, det)


def _exact_nonzero(g: Graph) -> list:
    out = []
    for e in classify_spectrum(g, require_connected=False):
        x = e.exact()
        if x is None:
            raise AssertionError("expected an exact spectrum")
        if x != 0:
            out.extend([x] * e.multiplicity)
    return out


# ---------------------------------------------------------------- 2

def _quadratic_pair(p: int, d: int, r: int) -> set[str]:
    return {str(QuadraticNumber(Fraction(p, r), Fraction(s, r), d)) for s in (1, -1)}


def check_irrational() -> CheckResult:
    det, ok = [], True
    claims = {"5.16": (3, 2, 1), "5.21": (7, 5, 2), "5.24": (5, 13, 2)}
    for cid, (p, d, r) in claims.items():
        have = {str(e.exact()) for e in classify_spectrum(catalog_graph(cid)) if e.kind == QUADRATIC}
        want = _quadratic_pair(p, d, r)
        hit = want <= have
        ok &= hit
        det.append(f"{cid}: quadratic eigenvalues {sorted(have)}; contains {sorted(want)}: {hit}")
    exact = sorted((e.exact() for e in classify_spectrum(chain(5))), key=float)
    closed = sorted((p.value for p in chain_spectrum(5)), key=float)
    c5 = len(exact) == len(closed) and all(_eq(a, b) for a, b in zip(exact, closed))
    ok &= c5
    det.append(f"chain 5: closed form equals exact spectrum as a set: {c5}")
    report = verify_appendix_tables([r for r in _rows("tab7aa")])
    for r in report.rows:
        lam = _fmt_lam(r.lam)
        if r.status == SCALED_PASS:
            state = "verified"
        elif r.alt_lambda is not None and _conjugates(r.lam, r.alt_lambda):
            state = f"verified for the conjugate value {r.alt_lambda} (pairing logged)"
        else:
            state = "not verified at the stated labelling" + (
                f"; valid after relabeling {r.relabeling}" if r.relabeling else "")
            ok = False
        note = "; index flag logged" if any(f.startswith("printed index") for f in r.flags) else ""
        det.append(f"{r.ref} {r.catalog_id} lambda={lam}: {state}{note}")
    return CheckResult(2, "irrational eigenvalues and printed irrational eigenvectors", ok, det)


def _eq(a, b) -> bool:
    if isinstance(b, float) or isinstance(a, float):
        return abs(float(a) - float(b)) < 1e-12
    return a == b


def _conjugates(lam: QuadraticNumber, text: str) -> bool:
    conj = QuadraticNumber(lam.a, -lam.b, lam.d)
    from .spectra import Eigenvalue
    return str(Eigenvalue.from_exact(conj)) == text


def _rows(table: str):
    from .tables import bundled_rows
    return bundled_rows([table])


# ---------------------------------------------------------------- 3

def _violations_for_n(n: int) -> tuple[int, int, list[str]]:
    graphs = enumerate_connected_graphs(n)
    bad = []
    for g in graphs:
        v = rational_root_violations(g)
        if v:
            bad.append(f"{g.edges}: {v}")
    return n, len(graphs), bad


def check_integer_or_irrational(threads: int = 1) -> CheckResult:
    ns = range(1, 7)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_violations_for_n, ns))
    else:
        parts = [_violations_for_n(n) for n in ns]
    total = sum(c for _, c, _ in parts)
    bad = [b for _, _, bs in parts for b in bs]
    det = [f"connected graphs scanned for n = 1..6: {total}",
           f"non-integer rational eigenvalues found: {len(bad)}"] + bad[:5]
    return CheckResult(3, "no non-integer rational Laplacian eigenvalue (n <= 6)", not bad and total == 143, det)


# ---------------------------------------------------------------- 4

def check_enumeration() -> CheckResult:
    counts = tuple(len(enumerate_connected_graphs(n)) for n in range(1, 7))
    det = [f"connected classes per n = 1..6: {counts}"]
    ok = counts == EXPECTED_CLASS_COUNTS
    items = list(catalog_by_id().items())
    small = match_catalog(items, {2, 3, 4, 5})
    det.append(f"entries with 2 <= n <= 5: {small.entries} rows, {small.classes} classes, bijective: {small.bijective}")
    ok &= small.bijective and small.entries == 30
    six = match_catalog(items, {6})
    det.append(f"6-vertex entries: {six.entries} rows for {six.classes} classes")
    for key, flags in sorted(six.flagged.items()):
        det.append(f"flagged {key}: {', '.join(flags)}")
    for cls, ids in sorted(six.shared_classes.items()):
        det.append(f"class {cls} shared by {', '.join(ids)}")
    for cls in six.unmatched_classes:
        det.append(f"class {cls} has no row")
    anomalous = {k for k, fl in six.flagged.items()
                 if any(f.startswith(("same-edges-as", "suffixed-id")) for f in fl)}
    copies = {k for k, fl in six.flagged.items() if any(f.startswith("same-edges-as") for f in fl)}
    clean = {c: [i for i in ids if i not in anomalous] for c, ids in six.class_to_ids.items()}
    injective = all(len(v) <= 1 for v in clean.values())
    explained = injective and len(six.unmatched_classes) <= len(copies) and not six.disconnected
    det.append(f"after setting aside flagged rows {sorted(anomalous)}: injective {injective}, "
               f"{len(six.unmatched_classes)} unmatched class(es) for {len(copies)} copied row(s)")
    ok &= explained and "6.103#2" in six.flagged
    return CheckResult(4, "enumeration counts and catalog matching", ok, det)


# ---------------------------------------------------------------- 5

@dataclass
class SuiteCounts:
    applied: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def add(self, kind: str) -> None:
        self.applied[kind] = self.applied.get(kind, 0) + 1


def _expected_lambda(rec) -> object:
    """Output eigenvalue each kind promises, computed from the inputs and parameters only."""
    g, lam, _ = rec.inputs[0]
    if rec.kind in PRESERVING:
        return lam
    if rec.kind == INSERT_SOFT_NODES:
        return lam + rec.params["k"] * rec.params["weight"]
    if rec.kind == ADD_GLOBAL_SOFT_NODE:
        return lam + 1
    if rec.kind == MATCHING_TOGGLE:
        return lam + (2 if rec.params["mode"] == "add" else -2)
    if rec.kind == COMPLEMENT_PAIR:
        return g.n - lam
    if rec.kind == CARTESIAN_PAIR:
        return lam + rec.inputs[1][1]
    raise AssertionError(rec.kind)


def _attempt(counts: SuiteCounts, fn, *args) -> None:
    try:
        rec = fn(*args)
    except TransformError:
        return
    counts.add(rec.kind)
    # independent re-multiplication against the promised eigenvalue
    want = _expected_lambda(rec)
    L = laplacian(rec.graph)
    x = rec.vector
    holds = any(x) and all(sum(L[i][j] * x[j] for j in range(len(x))) == want * x[i] for i in range(len(x)))
    if not (rec.verified and rec.lam == want and holds):
        counts.failures.append(f"{rec.kind} {rec.params} on {rec.inputs[0][0].edges}")


def _member_suite(entry, partners) -> SuiteCounts:
    counts = SuiteCounts()
    g, lam = entry.graph, entry.lam
    n = g.n
    for x in entry.vectors():
        for i, j in itertools.permutations(range(1, n + 1), 2):
            if i < j:
                _attempt(counts, link_toggle, g, lam, x, i, j)
                _attempt(counts, soldering, g, lam, x, i, j)
            if g.has_edge(i, j):
                for alpha in (Fraction(1, 3), Fraction(1, 2)):
                    _attempt(counts, square_gadget, g, lam, x, i, j, alpha)
        for i in range(1, n + 1):
            _attempt(counts, articulation, g, lam, x, i)
            for k in (2, 3, 4):
                for shape in expansion_shapes(k):
                    _attempt(counts, regular_expansion, g, lam, x, i, shape)
        for pairing in antisymmetric_pairings(x):
            for k in (1, 2):
                _attempt(counts, insert_soft_nodes, g, lam, x, pairing, k)
            _attempt(counts, matching_toggle, g, lam, x, pairing, "add")
            _attempt(counts, matching_toggle, g, lam, x, pairing, "delete")
        _attempt(counts, add_global_soft_node, g, lam, x)
        _attempt(counts, complement_eigenpair, g, lam, x)
        _attempt(counts, product_eigenpair, g, lam, x, chain(2), 2, (1, -1))
        for other in partners:
            for y in other.vectors():
                for i in range(1, n + 1):
                    for j in range(1, other.n + 1):
                        _attempt(counts, link_join, g, lam, x, i, other.graph, other.lam, y, j)
                u = disjoint_union(g, other.graph)
                z = tuple(x) + tuple(y)
                for i in range(1, n + 1):
                    for j in range(1, other.n + 1):
                        if x[i - 1] == 0 and y[j - 1] == 0:
                            _attempt(counts, soldering, u, lam, z, i, n + j)
    return counts


def _suite_for_lambda(args) -> SuiteCounts:
    lam, n_max = args
    fam = lambda_soft_family(lam, n_max)
    total = SuiteCounts()
    for e in fam:
        c = _member_suite(e, fam)
        for k, v in c.applied.items():
            total.applied[k] = total.applied.get(k, 0) + v
        total.failures.extend(c.failures)
    return total


def transform_suite(n_max: int = 5, threads: int = 1) -> SuiteCounts:
    """Every transform at every valid parameter choice on every lambda-soft graph with n <= n_max."""
    lams = [(lam, n_max) for lam in range(1, 2 * n_max) if lam <= 2 * (n_max - 1)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_suite_for_lambda, lams))
    else:
        parts = [_suite_for_lambda(a) for a in lams]
    total = SuiteCounts()
    for c in parts:
        for k, v in c.applied.items():
            total.applied[k] = total.applied.get(k, 0) + v
        total.failures.extend(c.failures)
    return total


def check_transform_suite(threads: int = 1) -> CheckResult:
    suite = transform_suite(5, threads)
    det = [f"{k}: {suite.applied.get(k, 0)} applications" for k in PRESERVING + SHIFTING]
    det.append(f"failures: {len(suite.failures)}")
    det.extend(suite.failures[:5])
    missing = [k for k in PRESERVING + SHIFTING if not suite.applied.get(k)]
    if missing:
        det.append(f"never applicable: {missing}")
    return CheckResult(5, "transform property suite on lambda-soft graphs with n <= 5",
                       not suite.failures and not missing, det)


# ---------------------------------------------------------------- 6

def minimal_counts(n_max: int = 6) -> dict[int, list[str]]:
    return {lam: [e.id for e in minimal_members(lambda_soft_family(lam, n_max))] for lam in range(1, 6)}


def check_minimal_counts() -> CheckResult:
    got = minimal_counts(6)
    det = []
    ok = True
    for lam, ids in got.items():
        hit = len(ids) == EXPECTED_MINIMAL[lam]
        ok &= hit
        det.append(f"lambda={lam}: {len(ids)} minimal ({', '.join(ids)}); expected {EXPECTED_MINIMAL[lam]}")
    return CheckResult(6, "minimal lambda-soft counts at n_max = 6", ok, det)


# ---------------------------------------------------------------- 7

WORKED = {
    "articulation": (build_graph(7, [(1, 3), (2, 3), (4, 5), (5, 6), (5, 7), (3, 4), (3, 5), (3, 6)]),
                     [1, 2, 3], 1, (1, -1, 0)),
    "link": (build_graph(6, [(1, 2), (2, 3), (4, 5), (5, 6), (1, 4), (2, 5), (3, 6)]),
             [1, 2, 3], 1, (1, 0, -1)),
    "shared": (build_graph(8, [(1, 2), (2, 3), (3, 4), (1, 4), (5, 7), (6, 7), (7, 8), (4, 5), (4, 6)]),
               [1, 2, 3, 4], 2, (1, 0, -1, 0)),
}


def check_worked_examples() -> CheckResult:
    det, ok = [], True
    third = Fraction(1, 3)
    g, sub, lam, X = WORKED["articulation"]
    D = schur_delta(split_embedding(g, sub))
    want = [[2 * third if i == j else -third for j in range(3)] for i in range(3)]
    (r,) = classify_case(g, sub, lam, X)
    hit = D == want and r.case == CASE_ART and dichotomy_check(g, sub, lam).holds
    ok &= hit
    det.append(f"articulation configuration: Delta {_mat(D)}, case {r.case}: {hit}")
    g, sub, lam, X = WORKED["link"]
    D = schur_delta(split_embedding(g, sub))
    (r,) = classify_case(g, sub, lam, X)
    hit = all(v == 0 for row in D for v in row) and r.case == CASE_LINK and dichotomy_check(g, sub, lam).holds
    ok &= hit
    det.append(f"link configuration: Delta {_mat(D)}, case {r.case}, X' {_vec(r.X_prime)}: {hit}")
    g, sub, lam, X = WORKED["shared"]
    D = schur_delta(split_embedding(g, sub))
    (r,) = classify_case(g, sub, lam, X)
    xp = tuple(r.X_prime) if r.X_prime else None
    hit = (r.case == CASE_SHARED and r.lam_prime == 1 and xp is not None
           and tuple(Fraction(v) for v in xp) == (1, -1, 0, 0) and dichotomy_check(g, sub, lam).holds)
    ok &= hit
    det.append(f"shared configuration: Delta {_mat(D)}, case {r.case}, lambda' {r.lam_prime}, "
               f"X' {_vec(xp)}: {hit}")
    return CheckResult(7, "the three worked embedding configurations", ok, det)


def _mat(D) -> str:
    return "[" + "; ".join(" ".join(str(v) for v in row) for row in D) + "]"


def _vec(v) -> str:
    return "None" if v is None else "(" + ",".join(str(x) for x in v) + ")"


# ---------------------------------------------------------------- 8

def check_tables() -> CheckResult:
    report = verify_appendix_tables()
    tot = report.totals()
    ledger = format_ledger(report)
    committed = ledger == bundled_ledger()
    diagnosed = all(r.diagnosis or r.flags for r in report.ledger_rows())
    det = [f"rows checked: {len(report.rows)}",
           "status counts: " + ", ".join(f"{k}={v}" for k, v in tot.items()),
           f"every row exact-pass or in the ledger: {report.covered()}",
           f"every ledger entry carries a diagnosis: {diagnosed}",
           f"committed ledger matches regenerated ledger: {committed}"]
    return CheckResult(8, "table harness with discrepancy ledger", report.covered() and committed and diagnosed, det)


# ---------------------------------------------------------------- 9

def closed_form_cases(max_n: int = 12):
    """(name, closed-form pairs, Laplacian) for every family member up to max_n vertices."""
    from .graph import clique, complete_multipartite, star
    for n in range(1, max_n + 1):
        yield f"K{n}", clique_spectrum(n), laplacian(clique(n))
    for n in range(2, max_n + 1):
        yield f"S{n}", star_spectrum(n), laplacian(star(n))
    for a in range(1, max_n):
        for b in range(a, max_n - a + 1):
            yield f"K{a},{b}", bipartite_spectrum(a, b), laplacian(complete_multipartite([a, b]))
    for n in range(3, max_n + 1):
        for parts in _partitions(n, 3):
            yield f"K{parts}", multipartite_spectrum(parts), laplacian(complete_multipartite(parts))
    for n in range(3, max_n + 1):
        yield f"Cy{n}", cycle_spectrum(n), laplacian(cycle(n))
    for n in range(1, max_n + 1):
        yield f"Ch{n}", chain_spectrum(n), laplacian(chain(n))


def _partitions(n: int, min_parts: int, largest: int | None = None):
    """Partitions of n into at least min_parts parts, non-increasing."""
    largest = n if largest is None else largest

    def rec(rest, cap):
        if rest == 0:
            yield []
            return
        for k in range(min(rest, cap), 0, -1):
            for tail in rec(rest - k, k):
                yield [k] + tail

    return [p for p in rec(n, largest) if len(p) >= min_parts]


def check_oracle() -> CheckResult:
    det, ok = [], True
    worst, count = 0.0, 0
    for name, pairs, L in closed_form_cases(12):
        w, _ = jacobi_eigh(L)
        closed = sorted(float(p.value) for p in pairs)
        if len(closed) != len(w):
            ok = False
            det.append(f"{name}: {len(closed)} closed-form values for n={len(w)}")
            continue
        dev = float(np.max(np.abs(np.asarray(closed) - w)))
        worst = max(worst, dev)
        count += 1
        Lf = np.asarray([[float(v) for v in r] for r in L])
        for p in pairs:
            v = p.float_vector()
            if np.max(np.abs(Lf @ v - float(p.value) * v)) > ORACLE_TOL * max(1.0, np.linalg.norm(v)):
                ok = False
                det.append(f"{name}: closed-form vector fails at lambda={p.value}")
    ok &= worst <= ORACLE_TOL
    det.append(f"closed-form families checked: {count}; worst eigenvalue deviation from Jacobi {worst:.1e}")
    merris = []
    graphs = 0
    for n in range(1, 7):
        for g in enumerate_connected_graphs(n):
            graphs += 1
            merris.extend(merris_degree_zero_check(g))
    ok &= not merris
    det.append(f"degree n-1 zero-component check over {graphs} connected graphs: {len(merris)} violations")
    ch3 = chain(3)
    prod = cartesian_product(ch3, ch3)
    got = sorted(x for e in classify_spectrum(prod) for x in [e.exact()] * e.multiplicity)
    want = sorted(a + b for a in (0, 1, 3) for b in (0, 1, 3))
    hit = got == want
    ok &= hit
    det.append(f"Ch3 x Ch3 spectrum {got} equals pairwise sums of (0, 1, 3): {hit}")
    return CheckResult(9, "closed forms against the Jacobi oracle, degree zero components, product spectrum", ok, det)


# ---------------------------------------------------------------- driver

CHECKS: dict[int, Callable[..., CheckResult]] = {
    1: check_table1,
    2: check_irrational,
    3: check_integer_or_irrational,
    4: check_enumeration,
    5: check_transform_suite,
    6: check_minimal_counts,
    7: check_worked_examples,
    8: check_tables,
    9: check_oracle,
}
_THREADED = {3, 5}


def run_check(number: int, threads: int = 1) -> CheckResult:
    fn = CHECKS[number]
    return _timed(number, fn, threads) if number in _THREADED else _timed(number, fn)


def run_all(threads: int = 1, only: list[int] | None = None) -> list[CheckResult]:
    return [run_check(k, threads) for k in sorted(only or CHECKS)]


def summary_text(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(r.line())
        lines.extend(f"    {d}" for d in r.details)
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
