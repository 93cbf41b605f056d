"""Weighted simple graphs, Laplacians and small-graph enumeration.

Vertices are numbered 1..n at every public interface.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

MAX_CANONICAL_N = 8


class GraphError(ValueError):
    """Invalid graph construction or unsupported graph operation."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...]
    label: str | None = field(default=None, compare=False)
    provenance: tuple = field(default=(), compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def unit_weighted(self) -> bool:
        return all(w == 1 for w in self.weights)

    def weight(self, i: int, j: int) -> Fraction:
        """Weight of edge ij, 0 when absent."""
        return self._weight_map().get((min(i, j), max(i, j)), Fraction(0))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._weight_map()

    def _weight_map(self) -> dict:
        wm = self.__dict__.get("_wm")
        if wm is None:
            wm = dict(zip(self.edges, self.weights))
            object.__setattr__(self, "_wm", wm)
        return wm

    def neighbors(self, v: int) -> list[int]:
        return sorted([j for i, j in self.edges if i == v] + [i for i, j in self.edges if j == v])

    def degree(self, v: int) -> Fraction:
        """Weighted degree."""
        return sum((w for (i, j), w in zip(self.edges, self.weights) if v in (i, j)), Fraction(0))

    def adjacency_sets(self) -> list[set[int]]:
        """0-indexed neighbour sets."""
        adj = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i - 1].add(j - 1)
            adj[j - 1].add(i - 1)
        return adj

    def with_label(self, label: str | None) -> Graph:
        return Graph(self.n, self.edges, self.weights, label, self.provenance)

    def with_provenance(self, step) -> Graph:
        return Graph(self.n, self.edges, self.weights, self.label, self.provenance + (step,))

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        es = " ".join(f"{i}{j}" if w == 1 else f"{i}{j}:{w}" for (i, j), w in zip(self.edges, self.weights))
        return f"<Graph{tag} n={self.n} [{es}]>"


def build_graph(n: int, edges: Iterable[Sequence[int]], weights: Sequence | None = None,
                label: str | None = None) -> Graph:
    """Validate and build a graph on vertices 1..n. Weights default to 1."""
    if n < 1:
        raise GraphError(f"vertex count must be >= 1, got {n}")
    edges = [tuple(e) for e in edges]
    if weights is None:
        weights = [1] * len(edges)
    if len(weights) != len(edges):
        raise GraphError("weights and edges differ in length")
    seen = {}
    for (i, j), w in zip(edges, weights):
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphError(f"vertex out of range 1..{n} in edge {i}{j}")
        if i == j:
            raise GraphError(f"loop at vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphError(f"duplicate edge {key[0]}{key[1]}")
        w = Fraction(w)
        if w <= 0:
            raise GraphError(f"non-positive weight {w} on edge {key[0]}{key[1]}")
        seen[key] = w
    keys = sorted(seen)
    return Graph(n, tuple(keys), tuple(seen[k] for k in keys), label)


def laplacian(g: Graph) -> tuple[tuple[Fraction, ...], ...]:
    """L_ii = weighted degree, L_ij = -w_ij."""
    L = [[Fraction(0)] * g.n for _ in range(g.n)]
    for (i, j), w in zip(g.edges, g.weights):
        L[i - 1][j - 1] -= w
        L[j - 1][i - 1] -= w
        L[i - 1][i - 1] += w
        L[j - 1][j - 1] += w
    return tuple(tuple(r) for r in L)


def is_laplacian(L) -> bool:
    n = len(L)
    return all(L[i][j] == L[j][i] for i in range(n) for j in range(n)) and \
        all(sum(r) == 0 for r in L) and all(L[i][j] <= 0 for i in range(n) for j in range(n) if i != j)


def is_connected(g: Graph) -> bool:
    adj = g.adjacency_sets()
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted 1-indexed vertex lists."""
    adj = g.adjacency_sets()
    left = set(range(g.n))
    comps = []
    while left:
        start = min(left)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        left -= seen
        comps.append(sorted(v + 1 for v in seen))
    return comps


def _require_unit(g: Graph, what: str):
    if not g.unit_weighted:
        raise GraphError(f"{what} requires a unit-weighted graph")


def complement(g: Graph) -> Graph:
    _require_unit(g, "complement")
    edges = [(i, j) for i in range(1, g.n + 1) for j in range(i + 1, g.n + 1) if not g.has_edge(i, j)]
    return build_graph(g.n, edges)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G box H with vertex (v, w) numbered (v-1)*n_h + w."""
    _require_unit(g, "cartesian_product")
    _require_unit(h, "cartesian_product")
    idx = lambda v, w: (v - 1) * h.n + w  # noqa: E731
    edges = []
    for v in range(1, g.n + 1):
        for a, b in h.edges:
            edges.append((idx(v, a), idx(v, b)))
    for w in range(1, h.n + 1):
        for a, b in g.edges:
            edges.append((idx(a, w), idx(b, w)))
    return build_graph(g.n * h.n, edges)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """H's vertices are shifted by g.n."""
    edges = list(g.edges) + [(i + g.n, j + g.n) for i, j in h.edges]
    return build_graph(g.n + h.n, edges, list(g.weights) + list(h.weights))


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Vertex v of g becomes perm[v-1] (1-indexed images)."""
    edges = [(perm[i - 1], perm[j - 1]) for i, j in g.edges]
    return build_graph(g.n, edges, g.weights, g.label)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    """Induced subgraph renumbered 1..k in the given vertex order."""
    pos = {v: k + 1 for k, v in enumerate(vertices)}
    edges, ws = [], []
    for (i, j), w in zip(g.edges, g.weights):
        if i in pos and j in pos:
            edges.append((pos[i], pos[j]))
            ws.append(w)
    return build_graph(len(vertices), edges, ws)


# ---------------------------------------------------------------- canonical form

def _canonical(n: int, adj: tuple[int, ...]) -> tuple[str, tuple[int, ...]]:
    # adj: bitmask rows. Bits are read column by column (pairs (a,b), a<b,
    # ordered by b then a); every column is a fixed-length block, so the
    # lexicographic minimum can be built one position at a time keeping only
    # the partial permutations that tie on the best prefix.
    states = [((v,), 1 << v) for v in range(n)]
    bits = []
    for k in range(1, n):
        best = None
        nxt = []
        for perm, used in states:
            for v in range(n):
                if used >> v & 1:
                    continue
                col = 0
                row = adj[v]
                for a in perm:
                    col = (col << 1) | (row >> a & 1)
                if best is None or col < best:
                    best = col
                    nxt = [(perm + (v,), used | 1 << v)]
                elif col == best:
                    nxt.append((perm + (v,), used | 1 << v))
        bits.append(format(best, f"0{k}b"))
        states = nxt
    return "".join(bits), states[0][0]


def _adj_masks(g: Graph) -> tuple[int, ...]:
    masks = [0] * g.n
    for i, j in g.edges:
        masks[i - 1] |= 1 << (j - 1)
        masks[j - 1] |= 1 << (i - 1)
    return tuple(masks)


def canonical_labeling(g: Graph) -> tuple[str, tuple[int, ...]]:
    """(canonical bit string, order) where order[p] is the 1-indexed vertex placed at position p."""
    _require_unit(g, "canonical_form")
    if g.n > MAX_CANONICAL_N:
        raise GraphError(f"canonical form limited to n <= {MAX_CANONICAL_N}")
    label, order = _canonical_cached(g.n, _adj_masks(g))
    return label, tuple(v + 1 for v in order)


@lru_cache(maxsize=1 << 16)
def _canonical_cached(n, masks):
    return _canonical(n, masks)


def canonical_form(g: Graph) -> str:
    """Minimum upper-triangular adjacency bit string over all vertex orders."""
    return canonical_labeling(g)[0]


def canonical_key(g: Graph) -> tuple[int, str]:
    return (g.n, canonical_form(g))


def from_canonical(n: int, bits: str, label: str | None = None) -> Graph:
    edges = []
    k = 0
    for b in range(1, n):
        for a in range(b):
            if bits[k] == "1":
                edges.append((a + 1, b + 1))
            k += 1
    return build_graph(n, edges, label=label)


def canonical_graph(g: Graph) -> Graph:
    """The isomorphic copy of g whose adjacency string is the canonical one."""
    return from_canonical(g.n, canonical_form(g), g.label)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


# ---------------------------------------------------------------- enumeration

def enumerate_connected_graphs(n: int) -> list[Graph]:
    """One canonical representative per isomorphism class of connected graphs on n vertices."""
    if n < 1:
        raise GraphError("n must be >= 1")
    if n > MAX_CANONICAL_N:
        raise GraphError(f"enumeration limited to n <= {MAX_CANONICAL_N}")
    return [from_canonical(n, bits) for bits in _connected_classes(n)]


@lru_cache(maxsize=None)
def _connected_classes(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("",)
    # Every connected graph has a non-cut vertex, so extending each
    # (n-1)-class by a vertex with a nonempty neighbourhood reaches every class.
    found = set()
    for bits in _connected_classes(n - 1):
        base = _adj_masks(from_canonical(n - 1, bits))
        for nb in range(1, 1 << (n - 1)):
            masks = list(base) + [nb]
            for v in range(n - 1):
                if nb >> v & 1:
                    masks[v] |= 1 << (n - 1)
            found.add(_canonical(n, tuple(masks))[0])
    return tuple(sorted(found))


def all_connected_graphs(n_max: int) -> list[Graph]:
    return [g for n in range(1, n_max + 1) for g in enumerate_connected_graphs(n)]


# ---------------------------------------------------------------- file formats

def parse_graph_file(text: str) -> Graph:
    """First line ``n``, then one edge per line: ``i j [num/den]``. '#' starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph file")
    n = int(lines[0])
    edges, weights = [], []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
        weights.append(Fraction(parts[2]) if len(parts) == 3 else Fraction(1))
    return build_graph(n, edges, weights)


def format_graph_file(g: Graph) -> str:
    out = [str(g.n)]
    for (i, j), w in zip(g.edges, g.weights):
        out.append(f"{i} {j}" if w == 1 else f"{i} {j} {w.numerator}/{w.denominator}")
    return "\n".join(out) + "\n"


def to_dot(g: Graph, values: Sequence | None = None, name: str = "G", bold: Iterable[int] = ()) -> str:
    """Graphviz DOT; optional per-vertex values become labels, ``bold`` vertices are drawn bold."""
    bold = set(bold)
    out = [f"graph {_dot_id(name)} {{"]
    for v in range(1, g.n + 1):
        attrs = []
        if values is not None:
            attrs.append(f'label="{v}: {values[v - 1]}"')
        if v in bold:
            attrs.append("style=bold")
        out.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for (i, j), w in zip(g.edges, g.weights):
        out.append(f"  {i} -- {j}" + ("" if w == 1 else f' [label="{w}"]') + ";")
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_id(name: str) -> str:
    return name if name.isidentifier() else '"' + name.replace('"', r"\"") + '"'


# ---------------------------------------------------------------- named graphs

def clique(n: int) -> Graph:
    return build_graph(n, itertools.combinations(range(1, n + 1), 2), label=f"K{n}")


def star(n: int) -> Graph:
    """Star S_n: vertex 1 joined to 2..n."""
    return build_graph(n, [(1, k) for k in range(2, n + 1)], label=f"S{n}")


def chain(n: int) -> Graph:
    return build_graph(n, [(k, k + 1) for k in range(1, n)], label=f"Ch{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return build_graph(n, [(k, k + 1) for k in range(1, n)] + [(1, n)], label=f"Cy{n}")


def complete_multipartite(parts: Sequence[int]) -> Graph:
    if not parts or any(p < 1 for p in parts):
        raise GraphError("parts must be positive sizes")
    owner = [k for k, p in enumerate(parts) for _ in range(p)]
    n = len(owner)
    edges = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if owner[i] != owner[j]]
    return build_graph(n, edges, label="K" + ",".join(map(str, parts)))


def regular_graphs(k: int, d: int) -> list[Graph]:
    """All d-regular graphs on k vertices up to isomorphism (k <= 8; may be disconnected)."""
    if k < 1 or d < 0 or d > k - 1 or (k * d) % 2:
        return []
    pairs = list(itertools.combinations(range(1, k + 1), 2))
    seen = {}
    for combo in itertools.combinations(pairs, k * d // 2):
        deg = [0] * (k + 1)
        for i, j in combo:
            deg[i] += 1
            deg[j] += 1
        if all(deg[v] == d for v in range(1, k + 1)):
            g = build_graph(k, combo)
            seen.setdefault(canonical_form(g), g)
    return [seen[key] for key in sorted(seen)]
