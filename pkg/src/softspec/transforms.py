"""Eigenvalue-preserving and eigenvalue-shifting graph transformations.

Every transform takes a graph with an exact eigenpair (lam, x) and returns a
``TransformRecord`` whose ``verified`` flag comes from re-multiplying the
output Laplacian against the output vector in exact arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import (Graph, build_graph, cartesian_product, complement, disjoint_union,
                    is_connected, laplacian, regular_graphs)
from .linalg import matvec

LINK = "Link"
LINK_JOIN = "LinkJoin"
ARTICULATION = "Articulation"
SOLDERING = "Soldering"
REGULAR_EXPANSION = "RegularExpansion"
SQUARE_GADGET = "SquareGadget"
INSERT_SOFT_NODES = "InsertSoftNodes"
ADD_GLOBAL_SOFT_NODE = "AddGlobalSoftNode"
MATCHING_TOGGLE = "MatchingToggle"
CARTESIAN_PAIR = "CartesianPair"
COMPLEMENT_PAIR = "ComplementPair"

PRESERVING = (LINK, LINK_JOIN, ARTICULATION, SOLDERING, REGULAR_EXPANSION, SQUARE_GADGET)
SHIFTING = (INSERT_SOFT_NODES, ADD_GLOBAL_SOFT_NODE, MATCHING_TOGGLE, CARTESIAN_PAIR, COMPLEMENT_PAIR)


class TransformError(ValueError):
    """A transform precondition does not hold."""


@dataclass(frozen=True)
class TransformRecord:
    kind: str
    params: dict
    inputs: tuple  # of (Graph, lam, x)
    graph: Graph
    lam: object
    vector: tuple
    verified: bool
    flags: tuple[str, ...] = field(default=())

    @property
    def input_lam(self):
        return self.inputs[0][1]

    @property
    def shift(self):
        return self.lam - self.input_lam


def verify_pair(g: Graph, lam, x: Sequence) -> bool:
    """Exact check that x is a nonzero vector with L(g) x = lam x."""
    if len(x) != g.n or not any(x):
        return False
    Lx = matvec(laplacian(g), list(x))
    return all(a - lam * b == 0 for a, b in zip(Lx, x))


def _record(kind, params, inputs, g: Graph, lam, x, flags=()) -> TransformRecord:
    x = tuple(x)
    flags = list(flags)
    if not is_connected(g):
        flags.append("disconnected")
    g = g.with_provenance((kind, tuple(sorted(params.items()))))
    return TransformRecord(kind, params, tuple(inputs), g, lam, x, verify_pair(g, lam, x), tuple(flags))


def _edges_weights(g: Graph):
    return list(g.edges), list(g.weights)


def _check_vertex(g: Graph, *vs):
    for v in vs:
        if not (1 <= v <= g.n):
            raise TransformError(f"vertex {v} out of range 1..{g.n}")


def _check_vector(g: Graph, x):
    if len(x) != g.n:
        raise TransformError(f"vector length {len(x)} does not match n={g.n}")


# ---------------------------------------------------------------- preserving

def link_toggle(g: Graph, lam, x, i: int, j: int, weight=1) -> TransformRecord:
    """Add edge ij if absent, delete it if present; needs x_i == x_j."""
    _check_vector(g, x)
    _check_vertex(g, i, j)
    if i == j:
        raise TransformError("link needs two distinct vertices")
    if x[i - 1] != x[j - 1]:
        raise TransformError(f"x_{i} != x_{j}")
    edges, ws = _edges_weights(g)
    key = (min(i, j), max(i, j))
    if key in edges:
        k = edges.index(key)
        del edges[k], ws[k]
        mode = "delete"
    else:
        edges.append(key)
        ws.append(Fraction(weight))
        mode = "add"
    out = build_graph(g.n, edges, ws)
    return _record(LINK, {"i": i, "j": j, "mode": mode}, [(g, lam, tuple(x))], out, lam, x)


def link_join(g1: Graph, lam1, x1, i: int, g2: Graph, lam2, x2, j: int) -> TransformRecord:
    """Disjoint union plus the edge i -- (n1 + j), vector x2_j (x1, 0) + x1_i (0, x2)."""
    _check_vector(g1, x1)
    _check_vector(g2, x2)
    _check_vertex(g1, i)
    _check_vertex(g2, j)
    if lam1 != lam2:
        raise TransformError("link_join needs equal eigenvalues")
    a, b = x1[i - 1], x2[j - 1]
    if not a and not b:
        raise TransformError("both joined entries are zero; the joined vector vanishes")
    u = disjoint_union(g1, g2)
    y = [b * v for v in x1] + [a * v for v in x2]
    if not any(y):
        raise TransformError("joined vector vanishes")
    edges, ws = _edges_weights(u)
    edges.append((i, g1.n + j))
    ws.append(Fraction(1))
    out = build_graph(u.n, edges, ws)
    return _record(LINK_JOIN, {"i": i, "j": j}, [(g1, lam1, tuple(x1)), (g2, lam2, tuple(x2))], out, lam1, y)


def articulation(g: Graph, lam, x, i: int, weight=1) -> TransformRecord:
    """Attach a pendant vertex n+1 to a soft vertex i."""
    _check_vector(g, x)
    _check_vertex(g, i)
    if x[i - 1]:
        raise TransformError(f"x_{i} is not zero")
    edges, ws = _edges_weights(g)
    edges.append((i, g.n + 1))
    ws.append(Fraction(weight))
    out = build_graph(g.n + 1, edges, ws)
    return _record(ARTICULATION, {"i": i, "weight": Fraction(weight)}, [(g, lam, tuple(x))], out, lam,
                   list(x) + [0 * x[0]])


def soldering(g: Graph, lam, x, i: int, j: int) -> TransformRecord:
    """Merge soft vertices i and j (j disappears; later vertices shift down)."""
    _check_vector(g, x)
    _check_vertex(g, i, j)
    if i == j:
        raise TransformError("soldering needs two distinct vertices")
    if x[i - 1] or x[j - 1]:
        raise TransformError("soldered vertices must both be soft")
    if g.has_edge(i, j):
        raise TransformError("soldering adjacent vertices would create a loop")
    if set(g.neighbors(i)) & set(g.neighbors(j)):
        raise TransformError("soldered vertices share a neighbour")
    ren = lambda v: (i if v == j else v) - (1 if v > j else 0)  # noqa: E731
    edges, ws = [], []
    for (a, b), w in zip(g.edges, g.weights):
        edges.append((ren(a), ren(b)))
        ws.append(w)
    out = build_graph(g.n - 1, edges, ws)
    y = [v for k, v in enumerate(x) if k != j - 1]
    return _record(SOLDERING, {"i": i, "j": j}, [(g, lam, tuple(x))], out, lam, y)


def regular_expansion(g: Graph, lam, x, i: int, adj: Graph, values: Sequence | None = None) -> TransformRecord:
    """Replace vertex i by the k vertices of a d-regular graph ``adj``.

    The new vertices occupy positions i..i+k-1 and are each joined to every
    (soft) neighbour of i with i's edge weights. By default they all carry
    x_i/k; ``values`` supplies another solution, which is checked against
    the general conditions by :func:`expansion_conditions`.
    """
    _check_vector(g, x)
    _check_vertex(g, i)
    k = adj.n
    degs = {len(adj.neighbors(v)) for v in range(1, k + 1)}
    if len(degs) != 1 or not adj.unit_weighted:
        raise TransformError("expansion graph is not regular")
    d = degs.pop()
    nbrs = g.neighbors(i)
    if any(x[s - 1] for s in nbrs):
        raise TransformError(f"vertex {i} has a non-soft neighbour")
    p = g.degree(i)
    if lam != p:
        raise TransformError(f"expansion requires lambda = {p} (weighted degree of {i}), got {lam}")
    old = lambda v: v if v < i else v + k - 1  # noqa: E731
    edges, ws = [], []
    for (a, b), w in zip(g.edges, g.weights):
        if i in (a, b):
            continue
        edges.append((old(a), old(b)))
        ws.append(w)
    for s in nbrs:
        for t in range(k):
            edges.append((old(s), i + t))
            ws.append(g.weight(i, s))
    for a, b in adj.edges:
        edges.append((i - 1 + a, i - 1 + b))
        ws.append(Fraction(1))
    out = build_graph(g.n + k - 1, edges, ws)
    xi = x[i - 1]
    if values is None:
        new = [xi * Fraction(1, k)] * k
    else:
        if len(values) != k:
            raise TransformError("need one value per new vertex")
        new = list(values)
    y = list(x[: i - 1]) + new + list(x[i:])
    flags = () if expansion_conditions(adj, new, xi) else ("expansion-conditions-violated",)
    return _record(REGULAR_EXPANSION, {"i": i, "k": k, "d": d}, [(g, lam, tuple(x))], out, lam, y, flags)


def expansion_conditions(adj: Graph, new_values: Sequence, xi) -> bool:
    """d x'_j = sum over internal neighbours of x', and the x' sum back to x_i."""
    d = len(adj.neighbors(1)) if adj.n else 0
    for j in range(1, adj.n + 1):
        if d * new_values[j - 1] != sum((new_values[t - 1] for t in adj.neighbors(j)), 0 * xi):
            return False
    return sum(new_values, 0 * xi) == xi


def square_gadget(g: Graph, lam, x, i: int, j: int, alpha=Fraction(1, 2)) -> TransformRecord:
    """Replace edge ij (x_i = -x_j) by the square i-k-j-l with soft k, l.

    Weights: w_ik = w_kj = 2 alpha w_ij and w_il = w_lj = 2 (1 - alpha) w_ij,
    so alpha = 1/2 keeps a unit graph unit.
    """
    _check_vector(g, x)
    _check_vertex(g, i, j)
    alpha = Fraction(alpha)
    if not (0 < alpha < 1):
        raise TransformError("alpha must lie strictly between 0 and 1")
    if not g.has_edge(i, j):
        raise TransformError(f"edge {i}{j} is absent")
    if x[i - 1] != -x[j - 1]:
        raise TransformError(f"x_{i} != -x_{j}")
    w = g.weight(i, j)
    edges, ws = _edges_weights(g)
    k = edges.index((min(i, j), max(i, j)))
    del edges[k], ws[k]
    kk, ll = g.n + 1, g.n + 2
    edges += [(i, kk), (kk, j), (i, ll), (ll, j)]
    ws += [2 * alpha * w, 2 * alpha * w, 2 * (1 - alpha) * w, 2 * (1 - alpha) * w]
    out = build_graph(g.n + 2, edges, ws)
    zero = 0 * x[0]
    return _record(SQUARE_GADGET, {"i": i, "j": j, "alpha": alpha}, [(g, lam, tuple(x))], out, lam,
                   list(x) + [zero, zero])


# ---------------------------------------------------------------- shifting

def _check_antisymmetric_pairs(x, pairs, what: str):
    covered = [v for p in pairs for v in p]
    if len(set(covered)) != len(covered):
        raise TransformError(f"{what}: pairs are not disjoint")
    nonzero = {k + 1 for k, v in enumerate(x) if v}
    if set(covered) != nonzero:
        raise TransformError(f"{what}: pairs must cover exactly the nonzero vertices {sorted(nonzero)}")
    for a, b in pairs:
        if x[a - 1] != -x[b - 1]:
            raise TransformError(f"{what}: x_{a} != -x_{b}")


def insert_soft_nodes(g: Graph, lam, x, pairing: Sequence[tuple[int, int]], k: int = 1,
                      weight=1) -> TransformRecord:
    """k new zero vertices per pair, each joined to both members; lambda -> lambda + k*w."""
    _check_vector(g, x)
    if k < 1:
        raise TransformError("k must be >= 1")
    pairing = [tuple(p) for p in pairing]
    _check_antisymmetric_pairs(x, pairing, "insert_soft_nodes")
    weight = Fraction(weight)
    edges, ws = _edges_weights(g)
    n = g.n
    for a, b in pairing:
        for _ in range(k):
            n += 1
            edges += [(a, n), (b, n)]
            ws += [weight, weight]
    out = build_graph(n, edges, ws)
    y = list(x) + [0 * x[0]] * (n - g.n)
    new_lam = lam + k * weight if weight != 1 else lam + k
    return _record(INSERT_SOFT_NODES, {"k": k, "pairs": tuple(pairing), "weight": weight},
                   [(g, lam, tuple(x))], out, new_lam, y)


def add_global_soft_node(g: Graph, lam, x) -> TransformRecord:
    """New vertex joined to every vertex; lambda -> lambda + 1."""
    _check_vector(g, x)
    if lam == 0:
        raise TransformError("eigenvalue must be nonzero")
    edges, ws = _edges_weights(g)
    edges += [(v, g.n + 1) for v in range(1, g.n + 1)]
    ws += [Fraction(1)] * g.n
    out = build_graph(g.n + 1, edges, ws)
    return _record(ADD_GLOBAL_SOFT_NODE, {}, [(g, lam, tuple(x))], out, lam + 1, list(x) + [0 * x[0]])


def matching_toggle(g: Graph, lam, x, matching: Sequence[tuple[int, int]], mode: str) -> TransformRecord:
    """Add (lambda + 2) or delete (lambda - 2) an alternate perfect matching."""
    _check_vector(g, x)
    matching = [(min(a, b), max(a, b)) for a, b in matching]
    _check_antisymmetric_pairs(x, matching, "matching")
    edges, ws = _edges_weights(g)
    if mode == "add":
        if any(g.has_edge(a, b) for a, b in matching):
            raise TransformError("a matching edge is already present")
        edges += matching
        ws += [Fraction(1)] * len(matching)
        new_lam = lam + 2
    elif mode == "delete":
        for e in matching:
            if e not in edges or g.weight(*e) != 1:
                raise TransformError(f"matching edge {e} is not a unit edge of the graph")
            k = edges.index(e)
            del edges[k], ws[k]
        new_lam = lam - 2
    else:
        raise TransformError("mode must be 'add' or 'delete'")
    out = build_graph(g.n, edges, ws)
    return _record(MATCHING_TOGGLE, {"mode": mode, "matching": tuple(matching)},
                   [(g, lam, tuple(x))], out, new_lam, x)


def product_eigenpair(g: Graph, mu, x, h: Graph, nu, y) -> TransformRecord:
    """x (kron) y on G box H affords mu + nu."""
    _check_vector(g, x)
    _check_vector(h, y)
    out = cartesian_product(g, h)
    z = [a * b for a in x for b in y]
    return _record(CARTESIAN_PAIR, {}, [(g, mu, tuple(x)), (h, nu, tuple(y))], out, mu + nu, z)


def complement_eigenpair(g: Graph, lam, x) -> TransformRecord:
    """Same vector affords n - lambda on the complement."""
    _check_vector(g, x)
    if lam == 0:
        raise TransformError("eigenvalue must be nonzero")
    out = complement(g)
    new_lam = g.n - lam
    flags = ("degenerate-zero-eigenvalue",) if new_lam == 0 else ()
    return _record(COMPLEMENT_PAIR, {}, [(g, lam, tuple(x))], out, new_lam, x, flags)


# ---------------------------------------------------------------- helpers

def antisymmetric_pairings(x: Sequence, limit: int = 12) -> list[tuple[tuple[int, int], ...]]:
    """All pairings of the nonzero vertices into pairs with x_a = -x_b (brute force)."""
    nz = [k + 1 for k, v in enumerate(x) if v]
    if len(nz) > limit:
        raise TransformError(f"more than {limit} nonzero entries")
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(tuple(acc))
            return
        a = rest[0]
        for b in rest[1:]:
            if x[a - 1] == -x[b - 1]:
                rec([v for v in rest if v not in (a, b)], acc + [(a, b)])

    if len(nz) % 2 == 0:
        rec(nz, [])
    return out


def expansion_shapes(k: int) -> list[Graph]:
    """Every regular graph on k vertices, for all admissible degrees."""
    return [h for d in range(k) for h in regular_graphs(k, d)]


# ---------------------------------------------------------------- script runner

def _parse_pairs(tokens: Sequence[str]) -> list[tuple[int, int]]:
    out = []
    for t in tokens:
        t = t.replace(",", "-")
        if "-" in t:
            a, b = t.split("-")
        elif len(t) == 2 and t.isdigit():
            a, b = t[0], t[1]
        else:
            raise TransformError(f"cannot parse pair {t!r}")
        out.append((int(a), int(b)))
    return out


def apply_script_line(g: Graph, lam, x, line: str) -> TransformRecord:
    """One line of the transform script language."""
    toks = line.split()
    op = toks[0].upper()
    args = toks[1:]
    try:
        if op == "LINK":
            return link_toggle(g, lam, x, int(args[0]), int(args[1]))
        if op == "ART":
            return articulation(g, lam, x, int(args[0]))
        if op == "SOLDER":
            return soldering(g, lam, x, int(args[0]), int(args[1]))
        if op == "EXPAND":
            i, k, d = map(int, args[:3])
            shapes = regular_graphs(k, d)
            if not shapes:
                raise TransformError(f"no {d}-regular graph on {k} vertices")
            return regular_expansion(g, lam, x, i, shapes[0])
        if op == "SQUARE":
            return square_gadget(g, lam, x, int(args[0]), int(args[1]), Fraction(args[2]) if len(args) > 2 else Fraction(1, 2))
        if op == "INSERT":
            return insert_soft_nodes(g, lam, x, _parse_pairs(args[1:]), int(args[0]))
        if op == "ADDSOFT":
            return add_global_soft_node(g, lam, x)
        if op == "MATCH":
            mode = {"+": "add", "-": "delete"}.get(args[0])
            if mode is None:
                raise TransformError("MATCH needs + or -")
            return matching_toggle(g, lam, x, _parse_pairs(args[1:]), mode)
        if op == "COMPLEMENT":
            return complement_eigenpair(g, lam, x)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, TransformError):
            raise
        raise TransformError(f"bad arguments in {line!r}: {exc}") from None
    raise TransformError(f"unknown transform {op!r}")


def run_script(g: Graph, lam, x, script: str) -> list[TransformRecord]:
    records = []
    for raw in script.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rec = apply_script_line(g, lam, x, line)
        records.append(rec)
        g, lam, x = rec.graph, rec.lam, rec.vector
    return records
