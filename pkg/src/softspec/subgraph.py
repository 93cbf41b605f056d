"""Block analysis of a subgraph G embedded in a larger graph G''.

With G's vertices ordered interior-first/boundary-last and the remainder G'
ordered boundary-first, the Laplacian of G'' is::

    L'' = diag(L, L') + [[0, 0, 0], [0, a, -b], [0, -b^T, c]]   (padded)

where a (p x p) and c (p' x p') are diagonal and b (p x p') holds the cross
edge weights. Eliminating the boundary values of G gives the Schur complement
Delta = c - b^T a^{-1} b acting on G' alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Graph, induced_subgraph, is_connected, is_laplacian, laplacian
from .linalg import field_one, matvec, nullspace, normalize_exact, shift, solve_affine
from .poly import char_poly
from .spectra import (Eigenvalue, _as_exact, exact_eigenspace,
                      spectrum_from_poly)

CASE_ZERO = "i"
CASE_ART = "ii-art"
CASE_LINK = "ii-link"
CASE_II_OTHER = "ii-other"
CASE_SHARED = "iii"
CASE_NONE = "iv"


class SubgraphError(ValueError):
    pass


@dataclass
class EmbeddingSplit:
    """Blocks of one embedding. ``order_g``/``order_gp`` map block rows to G'' vertices."""

    graph: Graph
    order_g: tuple[int, ...]
    order_gp: tuple[int, ...]
    p: int
    p_prime: int
    L: list
    L_prime: list
    a: list
    b: list
    c: list

    @property
    def n(self) -> int:
        return len(self.order_g)

    @property
    def n_prime(self) -> int:
        return len(self.order_gp)

    def delta_block(self) -> list:
        """delta = (a, -b; -b^T, c) of size (p + p')."""
        p, q = self.p, self.p_prime
        out = [[Fraction(0)] * (p + q) for _ in range(p + q)]
        for i in range(p):
            out[i][i] = self.a[i][i]
            for j in range(q):
                out[i][p + j] = -self.b[i][j]
                out[p + j][i] = -self.b[i][j]
        for j in range(q):
            out[p + j][p + j] = self.c[j][j]
        return out

    def reconstruct(self) -> list:
        """diag(L, L') plus the bordered delta, in block order."""
        n, m, p, q = self.n, self.n_prime, self.p, self.p_prime
        N = n + m
        M = [[Fraction(0)] * N for _ in range(N)]
        for i in range(n):
            for j in range(n):
                M[i][j] = self.L[i][j]
        for i in range(m):
            for j in range(m):
                M[n + i][n + j] = self.L_prime[i][j]
        d = self.delta_block()
        off = n - p
        for i in range(p + q):
            for j in range(p + q):
                M[off + i][off + j] += d[i][j]
        return M

    def permuted_laplacian(self) -> list:
        order = list(self.order_g) + list(self.order_gp)
        L2 = laplacian(self.graph)
        return [[L2[i - 1][j - 1] for j in order] for i in order]

    def abc_holds(self) -> bool:
        rows = all(self.a[i][i] == sum(self.b[i]) for i in range(self.p))
        cols = all(self.c[j][j] == sum(self.b[i][j] for i in range(self.p)) for j in range(self.p_prime))
        return rows and cols


def split_embedding(g2: Graph, sub_vertices: Sequence[int], require_connected: bool = True) -> EmbeddingSplit:
    sub = sorted(set(sub_vertices))
    if not sub or len(sub) == g2.n:
        raise SubgraphError("both sides of the embedding must be nonempty")
    if any(not (1 <= v <= g2.n) for v in sub):
        raise SubgraphError("subgraph vertex out of range")
    rest = [v for v in range(1, g2.n + 1) if v not in sub]
    inside = set(sub)
    cross = [(i, j, w) if i in inside else (j, i, w)
             for (i, j), w in zip(g2.edges, g2.weights) if (i in inside) != (j in inside)]
    bnd = sorted({i for i, _, _ in cross})
    bnd_p = sorted({j for _, j, _ in cross})
    if not cross:
        raise SubgraphError("no edges between the subgraph and the rest")
    order_g = tuple([v for v in sub if v not in bnd] + bnd)
    order_gp = tuple(bnd_p + [v for v in rest if v not in bnd_p])
    G = induced_subgraph(g2, order_g)
    Gp = induced_subgraph(g2, order_gp)
    if require_connected and not is_connected(G):
        raise SubgraphError("the subgraph G is disconnected")
    p, q = len(bnd), len(bnd_p)
    b = [[g2.weight(i, j) for j in bnd_p] for i in bnd]
    a = [[sum(b[i]) if i == k else Fraction(0) for k in range(p)] for i in range(p)]
    c = [[sum(b[i][j] for i in range(p)) if j == k else Fraction(0) for k in range(q)] for j in range(q)]
    return EmbeddingSplit(g2, order_g, order_gp, p, q, [list(r) for r in laplacian(G)],
                          [list(r) for r in laplacian(Gp)], a, b, c)


def schur_delta(split: EmbeddingSplit) -> list:
    """Delta = c - b^T a^{-1} b, checked symmetric with zero row sums."""
    p, q = split.p, split.p_prime
    D = [[split.c[j][k] - sum(split.b[i][j] * split.b[i][k] / split.a[i][i] for i in range(p))
          for k in range(q)] for j in range(q)]
    if any(D[j][k] != D[k][j] for j in range(q) for k in range(q)):
        raise AssertionError("Delta is not symmetric")
    if any(sum(r) != 0 for r in D):
        raise AssertionError("Delta has a nonzero row sum")
    return D


def pad(D: list, size: int) -> list:
    q = len(D)
    return [[D[i][j] if i < q and j < q else Fraction(0) for j in range(size)] for i in range(size)]


def link_structure(split: EmbeddingSplit) -> bool:
    """p = p', unit a and c, and b a permutation pattern."""
    if split.p != split.p_prime:
        return False
    if any(split.a[i][i] != 1 for i in range(split.p)) or any(split.c[j][j] != 1 for j in range(split.p_prime)):
        return False
    return all(sorted(row) == [0] * (len(row) - 1) + [1] for row in split.b)


@dataclass
class DeltaAnalysis:
    split: EmbeddingSplit
    delta: list
    delta_bar: list
    lam: object
    X: tuple
    case: str
    lam_prime: object = None
    X_prime: tuple | None = None
    boundary_from_gp: tuple | None = None
    extension_dim: int = 0
    extension_nonzero: bool = False
    falsification: str | None = None
    notes: list = field(default_factory=list)


def _exact_spectrum_values(M) -> list[Eigenvalue]:
    """Distinct eigenvalues of an integer Laplacian (G' may be disconnected)."""
    return spectrum_from_poly(char_poly([[int(v) for v in r] for r in M]))


def _in_spectrum(M, lam) -> bool:
    return bool(nullspace(shift(M, lam), len(M), field_one(lam)))


def _extension_space(split, D_bar, lam, Xb):
    """X' with (L' + Delta_bar - lam) X' = 0 and b X'_b = a X_b.

    Returns (particular, nullspace) or None if inconsistent.
    """
    m, p, q = split.n_prime, split.p, split.p_prime
    one = field_one(lam, *Xb)
    M = [[split.L_prime[i][j] + D_bar[i][j] - (lam if i == j else 0) for j in range(m)] for i in range(m)]
    rhs = [0] * m
    for i in range(p):
        M.append([split.b[i][j] if j < q else 0 for j in range(m)])
        rhs.append(split.a[i][i] * Xb[i])
    return solve_affine(M, rhs, one)


def _boundary_values(split, Xp):
    """X(n-p+1:n) = a^{-1} b X'(1:p')."""
    return tuple(sum((split.b[i][j] * Xp[j] for j in range(split.p_prime)), 0 * Xp[0]) / split.a[i][i]
                 for i in range(split.p))


def classify_case(g2: Graph, sub_vertices: Sequence[int], lam, X: Sequence | None = None) -> list[DeltaAnalysis]:
    """Case label for every eigenvector X of G (or only the given X).

    X is indexed by the sorted subgraph vertices. Exact eigenvalues only.
    """
    split = split_embedding(g2, sub_vertices)
    lam_ex = _as_exact(lam)
    if lam_ex is None:
        raise SubgraphError("classify_case needs an exact (integer or quadratic) eigenvalue")
    sub = sorted(set(sub_vertices))
    pos = {v: k for k, v in enumerate(sub)}
    perm = [pos[v] for v in split.order_g]
    if X is None:
        basis = exact_eigenspace(split.L, lam_ex)
        if not basis:
            raise SubgraphError(f"{lam} is not an eigenvalue of the subgraph")
        vectors = basis
    else:
        Xo = [X[k] for k in perm]
        if not any(Xo) or any(a - lam_ex * b != 0 for a, b in zip(matvec(split.L, Xo), Xo)):
            raise SubgraphError("X is not an eigenvector of the subgraph for lambda")
        vectors = [tuple(Xo)]
    D = schur_delta(split)
    D_bar = pad(D, split.n_prime)
    return [_classify_one(split, D, D_bar, lam_ex, tuple(v)) for v in vectors]


def _classify_one(split, D, D_bar, lam, X) -> DeltaAnalysis:
    n, p = split.n, split.p
    Xb = X[n - p:]
    res = DeltaAnalysis(split, D, D_bar, lam, X, CASE_NONE)
    ext = _extension_space(split, D_bar, lam, Xb)
    if ext is not None:
        part, ns = ext
        res.extension_dim = len(ns)
        res.extension_nonzero = any(part) or bool(ns)
    if lam == 0:
        res.case = CASE_ZERO
        return res
    delta_zero = all(v == 0 for r in D for v in r)
    if _in_spectrum(split.L_prime, lam):
        if delta_zero:
            res.case = CASE_LINK
            if not link_structure(split):
                res.notes.append("delta-zero-without-link-structure")
            if ext is not None:
                wit = _nonzero_member(ext)
                if wit is not None:
                    res.X_prime = tuple(wit)
                    res.boundary_from_gp = _boundary_values(split, wit)
        elif not any(Xb) and ext is not None:
            res.case = CASE_ART
            res.X_prime = tuple(ext[0])
            if res.extension_nonzero:
                res.notes.append("nonzero-extension-exists")
        else:
            res.case = CASE_II_OTHER
        return res
    shared = _shared_eigenvector(split, D_bar, lam, Xb)
    if shared is not None:
        res.case = CASE_SHARED
        res.lam_prime, res.X_prime = shared
        res.notes.append(_shift_mechanism(split, lam, res.lam_prime, Xb))
        res.boundary_from_gp = _boundary_values(split, res.X_prime) if res.X_prime and not isinstance(
            res.X_prime[0], float) else None
        return res
    res.case = CASE_NONE
    if ext is not None and res.extension_nonzero:
        res.falsification = "counterexample: nonzero solution of (Delta_bar + L' - lam) X' = 0"
    else:
        res.falsification = "no nonzero solution"
    return res


def _shift_mechanism(split, lam, lam_prime, Xb) -> str:
    """Label how the gap lam - lam' arises in a shared-eigenvector split."""
    gap = float(lam) - float(lam_prime)
    tag = "gap-equals-p" if abs(gap - split.p) < 1e-9 else f"gap-{gap:.4g}"
    return f"mechanism:{tag}:" + ("soft-boundary" if not any(Xb) else "valued-boundary")


def _nonzero_member(ext):
    part, ns = ext
    if any(part):
        return part
    if ns:
        return list(ns[0])
    return None


def _shared_eigenvector(split, D_bar, lam, Xb):
    """Some lam' with L'X' = lam' X', Delta_bar X' = (lam - lam') X', lam - lam' > 0, consistent with X."""
    m, p, q = split.n_prime, split.p, split.p_prime
    for ev in _exact_spectrum_values(split.L_prime):
        if not float(lam) - ev.approx > 1e-12:
            continue
        lp = ev.exact()
        if lp is None:
            hit = _shared_numeric(split, D_bar, float(lam), ev.approx, Xb)
            if hit is not None:
                return ev.approx, hit
            continue
        mu = lam - lp
        one = field_one(lam, lp)
        rows = [list(r) for r in shift(split.L_prime, lp)] + [list(r) for r in shift(D_bar, mu)]
        rhs = [0] * (2 * m)
        for i in range(p):
            rows.append([split.b[i][j] if j < q else 0 for j in range(m)])
            rhs.append(split.a[i][i] * Xb[i])
        sol = solve_affine(rows, rhs, one)
        if sol is None:
            continue
        wit = _nonzero_member(sol)
        if wit is not None:
            return lp, tuple(normalize_exact(wit)) if not any(Xb) else tuple(wit)
    return None


def _shared_numeric(split, D_bar, lam, lp, Xb, tol=1e-9):
    m, p, q = split.n_prime, split.p, split.p_prime
    if any(Xb):
        return None
    A = np.array([[float(v) for v in r] for r in split.L_prime]) - lp * np.eye(m)
    B = np.array([[float(v) for v in r] for r in D_bar]) - (lam - lp) * np.eye(m)
    C = np.array([[float(split.b[i][j]) if j < q else 0.0 for j in range(m)] for i in range(p)])
    M = np.vstack([A, B, C])
    _, s, vt = np.linalg.svd(M)
    s = np.concatenate([s, np.zeros(m - len(s))]) if len(s) < m else s
    null = vt[s < tol]
    return tuple(float(x) for x in null[0]) if len(null) else None


# ---------------------------------------------------------------- dichotomy

@dataclass
class DichotomyReport:
    p: int
    per_vector: list
    whole_space: bool
    violations: list

    @property
    def holds(self) -> bool:
        return not self.violations and self.whole_space


def dichotomy_check(g2: Graph, sub_vertices: Sequence[int], lam) -> DichotomyReport:
    """Each eigenvector X'' of G'' restricts on G to an eigenvector of G or vanishes inside G.

    ``whole_space`` is True when the entire eigenspace lies in one of the two
    subspaces, which is what the statement needs for arbitrary combinations.
    """
    split = split_embedding(g2, sub_vertices)
    lam_ex = _as_exact(lam)
    if lam_ex is None:
        raise SubgraphError("dichotomy_check needs an exact eigenvalue")
    L2 = split.permuted_laplacian()
    basis = exact_eigenspace(L2, lam_ex)
    n, p = split.n, split.p
    per, bad = [], []
    all_a, all_b = True, True
    for v in basis:
        R = list(v[:n])
        is_eig = any(R) and all(x - lam_ex * y == 0 for x, y in zip(matvec(split.L, R), R))
        interior_zero = not any(R[: n - p])
        per.append((tuple(v), is_eig, interior_zero))
        all_a &= is_eig or not any(R)
        all_b &= interior_zero
        if not (is_eig or interior_zero):
            bad.append(tuple(v))
    return DichotomyReport(p, per, bool(all_a or all_b), bad)


def delta_is_generalized_laplacian(D) -> bool:
    q = len(D)
    return all(D[i][j] == D[j][i] for i in range(q) for j in range(q)) and all(sum(r) == 0 for r in D)


def delta_block_is_laplacian(split: EmbeddingSplit) -> bool:
    return is_laplacian(split.delta_block())


@dataclass
class LinkScanHit:
    graph: Graph
    sub: tuple[int, ...]
    lam: int
    X: tuple
    X_prime: tuple
    p: int
    p_prime: int
    link: bool


def link_structure_scan(n_max: int = 6) -> list[LinkScanHit]:
    """Every connected embedding with Delta = 0, integer lam > 0 in spec(L) and spec(L'), and X' != 0.

    ``link`` records whether the boundary blocks have link structure.
    """
    from itertools import combinations

    from .graph import all_connected_graphs

    hits = []
    for g in all_connected_graphs(n_max):
        for k in range(1, g.n):
            for sub in combinations(range(1, g.n + 1), k):
                try:
                    split = split_embedding(g, sub)
                except SubgraphError:
                    continue
                D = schur_delta(split)
                if any(v for r in D for v in r):
                    continue
                D_bar = pad(D, split.n_prime)
                for ev in _exact_spectrum_values(split.L):
                    lam = ev.exact()
                    if ev.kind != "Integer" or not lam or not _in_spectrum(split.L_prime, lam):
                        continue
                    for X in exact_eigenspace(split.L, lam):
                        ext = _extension_space(split, D_bar, lam, X[split.n - split.p:])
                        wit = _nonzero_member(ext) if ext is not None else None
                        if wit is None or not any(wit):
                            continue
                        hits.append(LinkScanHit(g, sub, int(lam), tuple(X), tuple(wit), split.p,
                                                split.p_prime, link_structure(split)))
    return hits


@dataclass
class EmbeddingScan:
    embeddings: int = 0
    pairs: int = 0
    reconstruct_failures: list = field(default_factory=list)
    dichotomy_violations: list = field(default_factory=list)
    cases: dict = field(default_factory=dict)
    case_iv_solutions: list = field(default_factory=list)
    shared_mechanisms: dict = field(default_factory=dict)


def embedding_scan(n_max: int = 6) -> EmbeddingScan:
    """Every connected G inside every connected G'' with n'' <= n_max, every exact lambda of G.

    Records reconstruction failures, dichotomy violations as
    (graph, sub, lambda, p, multiplicity) and case (iv) instances whose
    eigen-relation nevertheless has a nonzero solution. Shared-eigenvector
    cases are tallied by mechanism label.
    """
    from itertools import combinations

    from .graph import all_connected_graphs

    out = EmbeddingScan()
    for g in all_connected_graphs(n_max):
        for k in range(1, g.n):
            for sub in combinations(range(1, g.n + 1), k):
                try:
                    split = split_embedding(g, sub)
                except SubgraphError:
                    continue
                out.embeddings += 1
                if split.reconstruct() != split.permuted_laplacian():
                    out.reconstruct_failures.append((g, sub))
                for ev in _exact_spectrum_values(split.L):
                    lam = ev.exact()
                    if lam is None:
                        continue
                    out.pairs += 1
                    if not dichotomy_check(g, sub, lam).holds:
                        out.dichotomy_violations.append((g, sub, str(ev), split.p, ev.multiplicity))
                    for r in classify_case(g, sub, lam):
                        out.cases[r.case] = out.cases.get(r.case, 0) + 1
                        for note in r.notes:
                            if note.startswith("mechanism:"):
                                out.shared_mechanisms[note] = out.shared_mechanisms.get(note, 0) + 1
                        if r.case == CASE_NONE and r.falsification and r.falsification.startswith("counterexample"):
                            out.case_iv_solutions.append((g, sub, str(ev), r.X))
    return out
