"""Connection-list catalog of small graphs.

Each line reads ``id&n&m&t1~t2~...`` where a token is two digit characters
naming the endpoints of one edge ("42" is the edge {2,4}). Source tables
contain typos, so problems are recorded as flags on the entry instead of
aborting the parse.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .graph import Graph, GraphError, build_graph, canonical_form, enumerate_connected_graphs

_ID = re.compile(r"^(\d+)([A-Za-z]*)$")


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    n: int
    m: int
    edges: tuple[tuple[int, int], ...]
    flags: tuple[str, ...] = field(default=())
    line: str = ""

    @property
    def ok(self) -> bool:
        return not any(f.startswith(("malformed", "vertex-out-of-range", "loop", "duplicate-edge"))
                       for f in self.flags)

    def graph(self) -> Graph:
        return build_graph(self.n, self.edges, label=self.id)


def parse_catalog(text: str, prefix: str | None = None) -> list[CatalogEntry]:
    """Parse catalog lines; ``prefix`` turns row id "16" into "5.16"."""
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("&")
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 4 '&'-separated fields: {line!r}")
        rid, n, m, conn = (p.strip() for p in parts)
        raw.append((rid, int(n), int(m), conn, line))

    id_counts = Counter(r[0] for r in raw)
    seen_ids: set[str] = set()
    seen_lists: dict = {}
    entries = []
    for rid, n, m, conn, line in raw:
        flags = []
        if not _ID.match(rid):
            flags.append(f"malformed-id:{rid}")
        elif _ID.match(rid).group(2):
            flags.append(f"suffixed-id:{rid}")
        if id_counts[rid] > 1:
            flags.append(f"duplicate-id:{rid}" + (":repeat" if rid in seen_ids else ":first"))
        seen_ids.add(rid)

        edges = []
        seen_edges = set()
        for tok in conn.split("~"):
            tok = tok.strip()
            if not tok:
                continue
            if not re.fullmatch(r"\d\d", tok):
                flags.append(f"malformed-token:{tok}")
                continue
            i, j = int(tok[0]), int(tok[1])
            if not (1 <= i <= n and 1 <= j <= n):
                flags.append(f"vertex-out-of-range:{tok}")
                continue
            if i == j:
                flags.append(f"loop:{tok}")
                continue
            key = (min(i, j), max(i, j))
            if key in seen_edges:
                flags.append(f"duplicate-edge:{tok}")
                continue
            if tok[0] > tok[1]:
                flags.append(f"reversed-token:{tok}")
            seen_edges.add(key)
            edges.append(key)
        if len(edges) != m:
            flags.append(f"m-mismatch:declared={m}:parsed={len(edges)}")
        eid = f"{prefix}.{rid}" if prefix else rid
        key = (n, frozenset(edges))
        if key in seen_lists:
            flags.append(f"same-edges-as:{seen_lists[key]}")
        else:
            seen_lists[key] = eid
        entries.append(CatalogEntry(eid, n, len(edges), tuple(edges), tuple(flags), line))
    return entries


@lru_cache(maxsize=None)
def bundled_catalog() -> tuple[CatalogEntry, ...]:
    """The shipped tables: entries "5.1".."5.30" (up to 5 vertices) and "6.1".."6.112"."""
    data = resources.files("softspec") / "data"
    small = parse_catalog((data / "catalog_upto5.txt").read_text("utf-8"), "5")
    big = parse_catalog((data / "catalog_6.txt").read_text("utf-8"), "6")
    return tuple(small + big)


def catalog_by_id() -> dict[str, CatalogEntry]:
    """Id lookup. For a duplicated id the first row wins; the repeat is reachable as id + "#2"."""
    out: dict[str, CatalogEntry] = {}
    for e in bundled_catalog():
        key = e.id
        while key in out:
            key = key + "#2" if "#" not in key else key[:-1] + str(int(key[-1]) + 1)
        out[key] = e
    return out


def catalog_graph(cid: str) -> Graph:
    try:
        return catalog_by_id()[cid].graph()
    except KeyError:
        raise KeyError(f"unknown catalog id {cid!r}") from None


@lru_cache(maxsize=None)
def _index_by_form() -> dict[tuple[int, str], tuple[str, ...]]:
    idx: dict[tuple[int, str], list[str]] = {}
    for key, e in catalog_by_id().items():
        if not e.ok:
            continue
        try:
            g = e.graph()
        except GraphError:
            continue
        idx.setdefault((e.n, canonical_form(g)), []).append(key)
    return {k: tuple(v) for k, v in idx.items()}


def catalog_ids_for(g: Graph) -> tuple[str, ...]:
    """Catalog ids whose graph is isomorphic to g (empty when none)."""
    if g.n > 6 or not g.unit_weighted:
        return ()
    return _index_by_form().get((g.n, canonical_form(g)), ())


def catalog_name(g: Graph) -> str | None:
    ids = catalog_ids_for(g)
    return ids[0] if ids else None


@dataclass
class CatalogMatch:
    """Result of matching catalog rows against the enumerated classes for one vertex range."""
    classes: int
    entries: int
    class_to_ids: dict[str, list[str]]
    unmatched_classes: list[str]
    shared_classes: dict[str, list[str]]
    flagged: dict[str, tuple[str, ...]]
    disconnected: list[str]

    @property
    def bijective(self) -> bool:
        return not self.unmatched_classes and not self.shared_classes and not self.disconnected


def match_catalog(entries, ns) -> CatalogMatch:
    """Map every entry with n in ``ns`` to its enumerated isomorphism class."""
    from .graph import is_connected

    classes = {(n, canonical_form(g)) for n in ns for g in enumerate_connected_graphs(n)}
    class_to_ids: dict[str, list[str]] = {}
    flagged = {}
    disconnected = []
    count = 0
    for key, e in entries:
        if e.n not in ns:
            continue
        count += 1
        if e.flags:
            flagged[key] = e.flags
        g = e.graph()
        if not is_connected(g):
            disconnected.append(key)
            continue
        class_to_ids.setdefault(f"{e.n}:{canonical_form(g)}", []).append(key)
    unmatched = sorted(f"{n}:{c}" for n, c in classes if f"{n}:{c}" not in class_to_ids)
    shared = {k: v for k, v in class_to_ids.items() if len(v) > 1}
    return CatalogMatch(len(classes), count, class_to_ids, unmatched, shared, flagged, disconnected)
