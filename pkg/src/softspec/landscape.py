"""Families of lambda-soft graphs, their minimal members and the transforms linking them."""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .catalog import catalog_by_id, catalog_ids_for
from .graph import (Graph, build_graph, canonical_key, disjoint_union, enumerate_connected_graphs,
                    from_canonical, induced_subgraph, is_connected)
from .spectra import graph_char_poly, soft_nodes
from .transforms import (TransformError, add_global_soft_node,
                         antisymmetric_pairings, articulation, complement_eigenpair,
                         expansion_shapes, insert_soft_nodes, link_join, link_toggle,
                         matching_toggle, regular_expansion, soldering, square_gadget)

MAX_FAMILY_N = 8


def key_str(g: Graph) -> str:
    n, form = canonical_key(g)
    return f"{n}:{form}"


@dataclass
class SoftFamilyEntry:
    key: str
    graph: Graph
    ids: tuple[str, ...]
    lam: int
    soft: tuple[int, ...]
    basis: tuple[tuple, ...]
    witnesses: dict[int, tuple]
    is_minimal: bool = False

    @property
    def id(self) -> str:
        return self.ids[0] if self.ids else self.key

    @property
    def n(self) -> int:
        return self.graph.n

    def vectors(self) -> list[tuple]:
        """Basis vectors plus the soft witnesses, without repeats."""
        seen, out = set(), []
        for v in list(self.basis) + [self.witnesses[s] for s in sorted(self.witnesses)]:
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out


@dataclass(frozen=True)
class ProvenanceEdge:
    source: str
    target: str
    kind: str
    lam_from: int
    lam_to: int
    params: tuple = ()
    partner: str | None = None


def _display_graph(g: Graph) -> tuple[Graph, tuple[str, ...]]:
    """Prefer the catalog labelling when the class is catalogued."""
    ids = catalog_ids_for(g) if g.n <= 6 else ()
    if ids:
        return catalog_by_id()[ids[0]].graph().with_label(ids[0]), ids
    return g, ids


@lru_cache(maxsize=None)
def _poly_for(key: str):
    n, bits = key.split(":")
    return graph_char_poly(from_canonical(int(n), bits))


def lambda_soft_family(lam: int, n_max: int = 6) -> list[SoftFamilyEntry]:
    """Connected graphs with at most n_max vertices having a soft node for integer lambda."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if not 1 <= n_max <= MAX_FAMILY_N:
        raise ValueError(f"n_max must be in 1..{MAX_FAMILY_N}")
    out = []
    for n in range(1, n_max + 1):
        for g in enumerate_connected_graphs(n):
            if _poly_for(key_str(g))(lam) != 0:
                continue
            entry = lambda_entry(g, lam)
            if entry.soft:
                out.append(entry)
    mark_minimal(out)
    return out


def lambda_entry(g: Graph, lam: int) -> SoftFamilyEntry:
    """Entry for any graph having integer eigenvalue lam; ``soft`` may be empty.

    Non-soft entries are useful as extra edge sources (a square gadget on the
    4-cycle at lambda 4, for instance, starts from a graph with no soft node).
    """
    key = key_str(g)
    shown, ids = _display_graph(g)
    rep = soft_nodes(shown, lam)
    basis = tuple(tuple(int(x) for x in v) for v in _int_basis(shown, lam))
    wit = {s: tuple(int(x) for x in v) for s, v in rep.witnesses.items()}
    return SoftFamilyEntry(key, shown, ids, lam, rep.soft, basis, wit)


def _int_basis(g: Graph, lam: int):
    from .spectra import rational_eigenspace
    return rational_eigenspace(g, lam)


# ---------------------------------------------------------------- minimality

@lru_cache(maxsize=None)
def deletion_children(key: str) -> tuple[str, ...]:
    """Classes reachable by deleting one edge or one vertex while staying connected."""
    n, bits = key.split(":")
    g = from_canonical(int(n), bits)
    out = set()
    for k in range(g.m):
        h = build_graph(g.n, g.edges[:k] + g.edges[k + 1:])
        if is_connected(h):
            out.add(key_str(h))
    if g.n > 1:
        for v in range(1, g.n + 1):
            h = induced_subgraph(g, [u for u in range(1, g.n + 1) if u != v])
            if is_connected(h):
                out.add(key_str(h))
    return tuple(sorted(out))


def connected_subgraph_classes(key: str) -> set[str]:
    """Every proper connected subgraph class of the graph with this key."""
    seen: set[str] = set()
    stack = list(deletion_children(key))
    while stack:
        k = stack.pop()
        if k in seen:
            continue
        seen.add(k)
        stack.extend(deletion_children(k))
    return seen


def mark_minimal(family: list[SoftFamilyEntry]) -> None:
    keys = {e.key for e in family}
    for e in family:
        e.is_minimal = not (connected_subgraph_classes(e.key) & keys)


def minimal_members(family: Sequence[SoftFamilyEntry]) -> list[SoftFamilyEntry]:
    return [e for e in family if e.is_minimal]


# ---------------------------------------------------------------- edges

def _try(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except TransformError:
        return None


def _unary_results(e: SoftFamilyEntry, n_max: int):
    """All single preserving or shifting applications to one member (within n_max)."""
    g, lam = e.graph, e.lam
    for x in e.vectors():
        n = g.n
        for i, j in itertools.combinations(range(1, n + 1), 2):
            if x[i - 1] == x[j - 1]:
                yield _try(link_toggle, g, lam, x, i, j)
            if x[i - 1] == 0 and x[j - 1] == 0:
                yield _try(soldering, g, lam, x, i, j)
            if g.has_edge(i, j) and x[i - 1] == -x[j - 1] and x[i - 1] and n + 2 <= n_max:
                yield _try(square_gadget, g, lam, x, i, j)
        if n + 1 <= n_max:
            for i in range(1, n + 1):
                if x[i - 1] == 0:
                    yield _try(articulation, g, lam, x, i)
        for i in range(1, n + 1):
            for k in range(2, n_max - n + 2):
                for shape in expansion_shapes(k):
                    yield _try(regular_expansion, g, lam, x, i, shape)
        for pairing in antisymmetric_pairings(x):
            for k in range(1, (n_max - n) // max(len(pairing), 1) + 1):
                yield _try(insert_soft_nodes, g, lam, x, pairing, k)
            if all(not g.has_edge(a, b) for a, b in pairing):
                yield _try(matching_toggle, g, lam, x, pairing, "add")
            if all(g.has_edge(a, b) for a, b in pairing):
                yield _try(matching_toggle, g, lam, x, pairing, "delete")
        if n + 1 <= n_max:
            yield _try(add_global_soft_node, g, lam, x)
        yield _try(complement_eigenpair, g, lam, x)


def _binary_results(e1: SoftFamilyEntry, e2: SoftFamilyEntry, n_max: int):
    if e1.lam != e2.lam:
        return
    g1, g2 = e1.graph, e2.graph
    for x1 in e1.vectors():
        for x2 in e2.vectors():
            if g1.n + g2.n <= n_max:
                for i in range(1, g1.n + 1):
                    for j in range(1, g2.n + 1):
                        yield _try(link_join, g1, e1.lam, x1, i, g2, e2.lam, x2, j)
            if g1.n + g2.n - 1 <= n_max:
                u = disjoint_union(g1, g2)
                y = tuple(x1) + tuple(x2)
                for i in range(1, g1.n + 1):
                    for j in range(1, g2.n + 1):
                        if x1[i - 1] == 0 and x2[j - 1] == 0:
                            yield _try(soldering, u, e1.lam, y, i, g1.n + j)


def discover_edges(families: dict[int, Sequence[SoftFamilyEntry]] | Sequence[SoftFamilyEntry],
                   n_max: int | None = None,
                   extra_sources: Sequence[SoftFamilyEntry] = ()) -> list[ProvenanceEdge]:
    """Single-step transforms whose output is isomorphic to a family member.

    Shifting transforms produce cross-family edges only when the target
    eigenvalue's family is part of ``families``. ``extra_sources`` are
    tried as unary sources only; their targets must still be members.
    """
    if not isinstance(families, dict):
        fam = list(families)
        families = {fam[0].lam: fam} if fam else {}
    if n_max is None:
        n_max = max((e.n for f in families.values() for e in f), default=0)
    index = {(lam, e.key): e for lam, f in families.items() for e in f}
    found: dict[tuple, ProvenanceEdge] = {}

    def land(rec, src: SoftFamilyEntry, partner: SoftFamilyEntry | None = None):
        if rec is None or not rec.verified or "disconnected" in rec.flags or not rec.graph.unit_weighted:
            return
        if rec.graph.n > n_max:
            return
        lam_to = rec.lam
        if isinstance(lam_to, Fraction):
            if lam_to.denominator != 1:
                return
            lam_to = int(lam_to)
        tgt = index.get((lam_to, key_str(rec.graph)))
        if tgt is None:
            return
        if tgt.key == src.key and lam_to == src.lam:
            return
        pk = partner.key if partner is not None else None
        edge = ProvenanceEdge(src.key, tgt.key, rec.kind, src.lam, lam_to, _freeze(rec.params), pk)
        found.setdefault((src.key, pk, tgt.key, rec.kind, src.lam, lam_to), edge)

    for lam, fam in sorted(families.items()):
        for e in fam:
            for rec in _unary_results(e, n_max):
                land(rec, e)
        for e1, e2 in itertools.combinations_with_replacement(fam, 2):
            for rec in _binary_results(e1, e2, n_max):
                land(rec, e1, e2)
    for e in extra_sources:
        for rec in _unary_results(e, n_max):
            land(rec, e)
    return sorted(found.values(), key=lambda ed: (ed.lam_from, ed.lam_to, ed.source, ed.target, ed.kind,
                                                   ed.partner or ""))


def _freeze(params: dict) -> tuple:
    return tuple(sorted((k, str(v)) for k, v in params.items()))


def reachability(edges: Iterable[ProvenanceEdge], root: str, lam: int) -> dict[str, int]:
    """Shortest number of same-lambda steps from root to each reachable key."""
    adj: dict[str, set[str]] = {}
    for e in edges:
        if e.lam_from != lam or e.lam_to != lam:
            continue
        adj.setdefault(e.source, set()).add(e.target)
        if e.partner is not None:
            adj.setdefault(e.partner, set()).add(e.target)
    dist = {root: 0}
    q = deque([root])
    while q:
        u = q.popleft()
        for v in sorted(adj.get(u, ())):
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


# ---------------------------------------------------------------- emission

def _vec(v) -> list:
    return [int(x) if Fraction(x).denominator == 1 else str(x) for x in v]


def family_document(family: Sequence[SoftFamilyEntry], edges: Sequence[ProvenanceEdge] = ()) -> dict:
    ids = {e.key: e.id for e in family}
    entries = [{
        "key": e.key,
        "id": e.id,
        "ids": list(e.ids),
        "n": e.n,
        "m": e.graph.m,
        "edges": [[i, j] for i, j in e.graph.edges],
        "lambda": e.lam,
        "soft_nodes": list(e.soft),
        "basis": [_vec(v) for v in e.basis],
        "witnesses": {str(s): _vec(v) for s, v in sorted(e.witnesses.items())},
        "minimal": e.is_minimal,
    } for e in sorted(family, key=lambda e: (e.n, e.graph.m, e.key))]
    eds = [{
        "source": ids.get(ed.source, ed.source),
        "partner": ids.get(ed.partner, ed.partner) if ed.partner else None,
        "target": ids.get(ed.target, ed.target),
        "kind": ed.kind,
        "lambda_from": ed.lam_from,
        "lambda_to": ed.lam_to,
    } for ed in edges]
    return {"entries": entries, "edges": eds}


def emit_landscape(family: Sequence[SoftFamilyEntry], edges: Sequence[ProvenanceEdge] = (),
                   fmt: str = "json", lam: int | None = None) -> str:
    fam = sorted(family, key=lambda e: (e.n, e.graph.m, e.key))
    if fmt == "json":
        doc = {"lambda": lam if lam is not None else (fam[0].lam if fam else None)}
        doc.update(family_document(fam, edges))
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt == "text":
        lines = [f"{'id':<10} {'n':>2} {'m':>3} {'minimal':<7} soft witness"]
        for e in fam:
            s = e.soft[0]
            lines.append(f"{e.id:<10} {e.n:>2} {e.graph.m:>3} {str(e.is_minimal):<7} "
                         f"{','.join(map(str, e.soft))} {tuple(_vec(e.witnesses[s]))}")
        ids = {e.key: e.id for e in fam}
        for ed in edges:
            src = ids.get(ed.source, ed.source) + (f"+{ids.get(ed.partner, ed.partner)}" if ed.partner else "")
            lines.append(f"{src} -> {ids.get(ed.target, ed.target)} [{ed.kind}]")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        return _family_dot(fam, edges)
    raise ValueError(f"unknown format {fmt!r}")


def _family_dot(fam: Sequence[SoftFamilyEntry], edges: Sequence[ProvenanceEdge]) -> str:
    """One cluster per vertex count; inside, one cluster per member with soft vertices bold."""
    out = ["graph landscape {", "  compound=true;"]
    anchor = {}
    for n, group in itertools.groupby(fam, key=lambda e: e.n):
        out.append(f'  subgraph cluster_n{n} {{ label="{n} vertices";')
        for k, e in enumerate(group):
            tag = f"m{n}_{k}"
            anchor[e.key] = (tag, f"{tag}_1")
            style = "bold" if e.is_minimal else "solid"
            out.append(f'    subgraph cluster_{tag} {{ label="{e.id}"; style={style};')
            w = e.witnesses[e.soft[0]]
            for v in range(1, e.n + 1):
                attr = f'label="{w[v - 1]}"' + (", style=bold" if v in e.soft else "")
                out.append(f"      {tag}_{v} [{attr}];")
            for i, j in e.graph.edges:
                out.append(f"      {tag}_{i} -- {tag}_{j};")
            out.append("    }")
        out.append("  }")
    for ed in edges:
        if ed.source in anchor and ed.target in anchor:
            (st, sa), (tt, ta) = anchor[ed.source], anchor[ed.target]
            out.append(f'  {sa} -- {ta} [ltail=cluster_{st}, lhead=cluster_{tt}, label="{ed.kind}", style=dashed];')
    out.append("}")
    return "\n".join(out) + "\n"
