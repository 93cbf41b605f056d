from __future__ import annotations

import networkx as nx

from softspec.catalog import (bundled_catalog, catalog_by_id, catalog_graph, catalog_ids_for, match_catalog,
                              parse_catalog)
from softspec.graph import chain, cycle

from conftest import to_nx


def test_parse_rows():
    (e,) = parse_catalog("7&4&4&12~14~23~34", prefix="5")
    assert e.id == "5.7" and e.graph() == cycle(4)
    (e,) = parse_catalog("12&5&8&12~14~15~23~42~25~34~45", prefix="5")
    assert (2, 4) in e.edges and "reversed-token:42" in e.flags
    (e,) = parse_catalog("3&3&2&12~23", prefix="5")
    assert e.graph() == chain(3)


def test_duplicate_103_and_87b_flagged():
    cat = catalog_by_id()
    assert "duplicate-id:103:repeat" in cat["6.103#2"].flags
    assert "duplicate-id:103:first" in cat["6.103"].flags
    assert "suffixed-id:87B" in cat["6.87B"].flags
    assert "same-edges-as:6.86" in cat["6.87"].flags


def test_edge_counts_consistent():
    for e in bundled_catalog():
        assert e.m == len(e.edges), e.id


def test_small_entries_are_bijective():
    cat = catalog_by_id()
    match = match_catalog(cat.items(), {2, 3, 4, 5})
    assert match.bijective
    assert match.classes == 30 and match.entries == 30


def test_six_vertex_anomalies():
    cat = catalog_by_id()
    match = match_catalog(cat.items(), {6})
    assert match.classes == 112
    assert len(match.unmatched_classes) == 1
    shared_ids = sorted(i for v in match.shared_classes.values() for i in v)
    assert shared_ids == ["6.86", "6.87", "6.87B", "6.91"]
    # every catalog entry agrees with networkx on isomorphism classes
    graphs = {k: to_nx(catalog_graph(k)) for k in cat if k.startswith("6.")}
    assert sum(1 for k in graphs if nx.is_connected(graphs[k])) == len(graphs)


def test_catalog_ids_for_lookup():
    assert "5.3" in catalog_ids_for(chain(3))
    assert "5.7" in catalog_ids_for(cycle(4))
    assert catalog_ids_for(cycle(7)) == ()
