from __future__ import annotations

import json

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from softspec.catalog import catalog_graph
from softspec.graph import build_graph, chain, clique, cycle, laplacian
from softspec.landscape import (ProvenanceEdge, connected_subgraph_classes, deletion_children, discover_edges,
                                emit_landscape, family_document, key_str, lambda_entry, lambda_soft_family,
                                minimal_members, reachability)
from softspec.transforms import ADD_GLOBAL_SOFT_NODE, ARTICULATION, PRESERVING, SQUARE_GADGET


@pytest.fixture(scope="module")
def families():
    return {lam: lambda_soft_family(lam, 6) for lam in range(1, 8)}


def numpy_soft(h: nx.Graph, lam: int) -> bool:
    L = nx.laplacian_matrix(h, nodelist=sorted(h)).toarray().astype(float)
    _, s, vt = np.linalg.svd(L - lam * np.eye(len(L)))
    null = vt[s < 1e-8]
    if len(null) == 0:
        return False
    if len(null) >= 2:
        return True
    return bool(np.any(np.abs(null[0]) < 1e-8))


def oracle_family(lam: int) -> list[nx.Graph]:
    return [h for h in nx.graph_atlas_g()[1:] if h.number_of_nodes() <= 6 and nx.is_connected(h)
            and numpy_soft(h, lam)]


def oracle_minimal(fam: list[nx.Graph]) -> list[nx.Graph]:
    out = []
    for g in fam:
        smaller = [f for f in fam if (f.number_of_nodes(), f.number_of_edges()) != (g.number_of_nodes(), g.number_of_edges())
                   and f.number_of_nodes() <= g.number_of_nodes() and f.number_of_edges() <= g.number_of_edges()]
        if not any(GraphMatcher(g, f).subgraph_is_monomorphic() for f in smaller):
            out.append(g)
    return out


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges)
    return h


@pytest.mark.parametrize("lam", range(1, 8))
def test_family_matches_numpy_oracle(families, lam):
    ours = families[lam]
    ref = oracle_family(lam)
    assert len(ours) == len(ref)
    for e in ours:
        assert any(nx.is_isomorphic(to_nx(e.graph), r) for r in ref)


@pytest.mark.parametrize("lam", range(1, 6))
def test_minimal_members_match_monomorphism_oracle(families, lam):
    ours = minimal_members(families[lam])
    ref = oracle_minimal(oracle_family(lam))
    assert len(ours) == len(ref)
    for e in ours:
        assert any(nx.is_isomorphic(to_nx(e.graph), r) for r in ref)


def test_minimal_counts(families):
    counts = [len(minimal_members(families[lam])) for lam in range(1, 6)]
    assert counts == [1, 1, 3, 3, 3]
    assert [e.id for e in minimal_members(families[1])] == ["5.3"]
    assert {e.id for e in minimal_members(families[3])} == {"5.2", "5.22", "6.106"}
    assert {e.id for e in minimal_members(families[4])} == {"5.5", "6.73", "6.93"}


def test_family_examples(families):
    c3 = [e for e in families[1] if e.n == 3]
    assert [e.id for e in c3] == ["5.3"] and c3[0].witnesses[2] == (1, 0, -1)
    four = {e.id for e in families[2] if e.n == 4}
    assert {"5.7", "5.5"} <= four
    assert [e for e in families[7] if e.n == 3] == []
    assert families[7] == []


def test_witnesses_are_exact(families):
    for fam in families.values():
        for e in fam:
            for s, v in e.witnesses.items():
                assert v[s - 1] == 0
                L = np.array([[float(x) for x in r] for r in laplacian(e.graph)])
                assert np.array_equal(L @ np.array(v, dtype=float), e.lam * np.array(v, dtype=float))


def test_deletion_closure():
    k = key_str(cycle(4))
    kids = deletion_children(k)
    assert key_str(chain(4)) in kids and key_str(chain(3)) in kids
    closure = connected_subgraph_classes(key_str(clique(4)))
    assert key_str(cycle(4)) in closure and key_str(clique(4)) not in closure
    assert len(closure) == 1 + 1 + 2 + 5  # K1, K2, two 3-vertex, five proper 4-vertex


def test_lambda_entry_for_non_soft_graph():
    e = lambda_entry(cycle(4), 4)
    assert e.soft == () and e.basis == ((1, -1, 1, -1),)


def test_family_argument_checks():
    with pytest.raises(ValueError):
        lambda_soft_family(0)
    with pytest.raises(ValueError):
        lambda_soft_family(1, 9)


@pytest.fixture(scope="module")
def edges_1_to_5(families):
    return discover_edges({1: families[1]}, 6)


def test_articulation_edge_from_chain(edges_1_to_5):
    c3, s4 = key_str(chain(3)), key_str(build_graph(4, [(1, 2), (1, 3), (1, 4)]))
    assert any(e.source == c3 and e.target == s4 and e.kind == ARTICULATION for e in edges_1_to_5)
    assert all(e.kind in PRESERVING for e in edges_1_to_5)


def test_reachability_from_chain(families, edges_1_to_5):
    dist = reachability(edges_1_to_5, key_str(chain(3)), 1)
    assert set(dist) == {e.key for e in families[1]}
    assert max(dist.values()) == 4
    deepest = [k for k, d in dist.items() if d == 4]
    assert [e.id for e in families[1] if e.key in deepest] == ["6.56"]


def test_square_gadget_edge_from_non_soft_source(families):
    src = lambda_entry(catalog_graph("5.7"), 4)
    edges = discover_edges({4: families[4]}, 6, extra_sources=[src])
    target = key_str(catalog_graph("6.93"))
    assert any(e.source == src.key and e.target == target and e.kind == SQUARE_GADGET for e in edges)


def test_cross_lambda_edge(families):
    k2 = lambda_entry(build_graph(2, [(1, 2)]), 2)
    fams = {2: [k2], 3: families[3]}
    edges = discover_edges(fams, 3)
    hit = [e for e in edges if e.kind == ADD_GLOBAL_SOFT_NODE and e.source == k2.key]
    assert hit and hit[0].lam_from == 2 and hit[0].lam_to == 3
    assert hit[0].target == key_str(clique(3))


def test_emission_formats(families, edges_1_to_5):
    fam = families[1]
    doc = json.loads(emit_landscape(fam, edges_1_to_5, "json", 1))
    assert doc["lambda"] == 1 and len(doc["entries"]) == 34
    assert doc["entries"][0]["id"] == "5.3" and doc["entries"][0]["minimal"] is True
    dot = emit_landscape(fam, edges_1_to_5, "dot", 1)
    assert dot.startswith("graph landscape {") and "cluster_n3" in dot
    text = emit_landscape(fam, (), "text", 1)
    assert text.splitlines()[1].startswith("5.3")
    with pytest.raises(ValueError):
        emit_landscape(fam, (), "yaml")


def test_lambda_four_document_lists_generators(families):
    doc = family_document(families[4])
    ids = {e["id"] for e in doc["entries"]}
    assert {"5.5", "6.93"} <= ids


def test_empty_family_document():
    doc = json.loads(emit_landscape([], [], "json", 7))
    assert doc == {"lambda": 7, "entries": [], "edges": []}
    assert emit_landscape([], [], "dot").startswith("graph landscape {")


def test_reachability_ignores_cross_lambda_edges():
    edges = [ProvenanceEdge("a", "b", "Link", 1, 1), ProvenanceEdge("b", "c", "AddGlobalSoftNode", 1, 2)]
    assert reachability(edges, "a", 1) == {"a": 0, "b": 1}
