from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from softspec.catalog import catalog_graph
from softspec.graph import (Graph, build_graph, chain, clique, complement, cycle, disjoint_union, is_isomorphic,
                            laplacian, star)
from softspec.landscape import lambda_soft_family
from softspec.linalg import matvec
from softspec.qfield import QuadraticNumber
from softspec.spectra import exact_eigenspace
from softspec.transforms import (PRESERVING, SHIFTING, TransformError, add_global_soft_node,
                                 antisymmetric_pairings, articulation, complement_eigenpair, expansion_conditions,
                                 insert_soft_nodes, link_join, link_toggle, matching_toggle, product_eigenpair,
                                 regular_expansion, run_script, soldering, square_gadget, verify_pair)

K2 = build_graph(2, [(1, 2)])
C3 = chain(3)


def numpy_check(g: Graph, lam, x) -> bool:
    """Independent float re-multiplication."""
    L = np.array([[float(v) for v in r] for r in laplacian(g)])
    v = np.array([float(a) for a in x])
    return bool(np.linalg.norm(v) > 0 and np.allclose(L @ v, float(lam) * v, atol=1e-9))


def check(rec, lam=None):
    assert rec.verified
    assert numpy_check(rec.graph, rec.lam, rec.vector)
    if lam is not None:
        assert rec.lam == lam
    return rec


def test_transform_groups():
    assert len(PRESERVING) == 6 and len(SHIFTING) == 5


def test_link_examples():
    rec = check(link_toggle(C3, 3, (1, -2, 1), 1, 3), 3)
    assert is_isomorphic(rec.graph, clique(3))
    rec = check(link_toggle(cycle(4), 2, (1, 0, -1, 0), 2, 4), 2)
    assert rec.graph.m == 5
    back = check(link_toggle(rec.graph, 2, rec.vector, 2, 4))
    assert back.params["mode"] == "delete" and back.graph == cycle(4)
    with pytest.raises(TransformError):
        link_toggle(C3, 1, (1, 0, -1), 1, 3)


def test_link_join_examples():
    rec = check(link_join(C3, 1, (1, 0, -1), 1, C3, 1, (1, 0, -1), 1), 1)
    assert rec.graph.n == 6 and rec.vector == (1, 0, -1, 1, 0, -1)
    with pytest.raises(TransformError):
        link_join(C3, 1, (1, 0, -1), 2, C3, 1, (1, 0, -1), 2)
    k3 = clique(3)
    check(link_join(k3, 3, (1, -1, 0), 1, k3, 3, (1, 0, -1), 1), 3)
    with pytest.raises(TransformError):
        link_join(C3, 1, (1, 0, -1), 1, k3, 3, (1, -1, 0), 1)


def test_articulation_examples():
    rec = check(articulation(C3, 1, (1, 0, -1), 2), 1)
    assert is_isomorphic(rec.graph, star(4)) and rec.vector == (1, 0, -1, 0)
    for v in (2, 4):
        check(articulation(cycle(4), 2, (1, 0, -1, 0), v), 2)
    with pytest.raises(TransformError):
        articulation(C3, 1, (1, 0, -1), 1)


def test_soldering_examples():
    two = disjoint_union(C3, C3)
    rec = check(soldering(two, 1, (1, 0, -1, 1, 0, -1), 2, 5), 1)
    assert is_isomorphic(rec.graph, star(5))
    c4s = disjoint_union(cycle(4), cycle(4))
    rec = check(soldering(c4s, 2, (1, 0, -1, 0) * 2, 2, 6), 2)
    assert rec.graph.n == 7
    with pytest.raises(TransformError):
        soldering(cycle(4), 2, (0, 1, 0, -1), 1, 2)  # adjacent and not both soft
    with pytest.raises(TransformError):
        soldering(cycle(4), 2, (1, 0, -1, 0), 2, 4)  # common neighbours


def test_regular_expansion_examples():
    rec = check(regular_expansion(C3, 1, (1, 0, -1), 1, build_graph(2, [])), 1)
    assert rec.graph.n == 4 and rec.vector == (Fraction(1, 2), Fraction(1, 2), 0, -1)
    same = check(regular_expansion(C3, 1, (1, 0, -1), 1, build_graph(1, [])))
    assert same.graph == C3
    # triangle plus square cluster with 3t + 4s = 1
    cluster = disjoint_union(cycle(3), cycle(4))
    t, s = Fraction(1, 5), Fraction(1, 10)
    assert expansion_conditions(cluster, [t] * 3 + [s] * 4, 1)
    rec = check(regular_expansion(cycle(4), 2, (1, 0, -1, 0), 1, cluster, [t] * 3 + [s] * 4), 2)
    assert not rec.flags
    bad = regular_expansion(cycle(4), 2, (1, 0, -1, 0), 1, cluster, [t] * 3 + [t] * 4)
    assert "expansion-conditions-violated" in bad.flags
    with pytest.raises(TransformError):
        regular_expansion(C3, 1, (1, 0, -1), 2, build_graph(2, []))  # neighbours are not soft
    with pytest.raises(TransformError):
        regular_expansion(C3, 3, (1, -2, 1), 1, build_graph(2, []))


def test_square_gadget_examples():
    rec = check(square_gadget(K2, 2, (1, -1), 1, 2), 2)
    assert is_isomorphic(rec.graph, cycle(4)) and rec.vector == (1, -1, 0, 0)
    w = check(square_gadget(K2, 2, (1, -1), 1, 2, Fraction(1, 3)))
    assert sorted(w.graph.weights) == [Fraction(2, 3)] * 2 + [Fraction(4, 3)] * 2
    with pytest.raises(TransformError):
        square_gadget(C3, 3, (1, -2, 1), 1, 2)
    with pytest.raises(TransformError):
        square_gadget(K2, 2, (1, -1), 1, 2, 1)


def test_square_gadget_needs_the_weight_factor():
    # without the factor 2 the new vertices would not be soft
    g = build_graph(4, [(1, 3), (3, 2), (1, 4), (4, 2)], [Fraction(1, 2)] * 4)
    assert not verify_pair(g, 2, (1, -1, 0, 0))


def test_insert_soft_nodes_examples():
    rec = check(insert_soft_nodes(K2, 2, (1, -1), [(1, 2)]), 3)
    assert is_isomorphic(rec.graph, clique(3))
    rec = check(insert_soft_nodes(cycle(4), 2, (1, 0, -1, 0), [(1, 3)], k=2), 4)
    assert rec.graph.n == 6
    rec = check(insert_soft_nodes(K2, 2, (1, -1), [(1, 2)], weight=Fraction(1, 2)), Fraction(5, 2))
    with pytest.raises(TransformError):
        insert_soft_nodes(C3, 3, (1, -2, 1), [(1, 3)])


def test_add_global_soft_node_examples():
    rec = check(add_global_soft_node(K2, 2, (1, -1)), 3)
    assert is_isomorphic(rec.graph, clique(3))
    check(add_global_soft_node(star(4), 1, (0, 1, -1, 0)), 2)
    check(add_global_soft_node(C3, 3, (1, -2, 1)), 4)
    with pytest.raises(TransformError):
        add_global_soft_node(K2, 0, (1, 1))


def test_matching_toggle_examples():
    two = disjoint_union(K2, K2)
    rec = check(matching_toggle(two, 2, (1, -1, 1, -1), [(1, 4), (2, 3)], "add"), 4)
    assert is_isomorphic(rec.graph, cycle(4))
    back = check(matching_toggle(cycle(4), 4, (1, -1, 1, -1), [(1, 2), (3, 4)], "delete"), 2)
    assert back.graph.m == 2 and "disconnected" in back.flags
    with pytest.raises(TransformError):
        matching_toggle(cycle(4), 2, (1, 0, -1, 0), [(1, 3), (2, 4)], "add")


def test_product_examples():
    rec = check(product_eigenpair(C3, 1, (1, 0, -1), C3, 3, (1, -2, 1)), 4)
    assert rec.graph.n == 9
    # cosine formula for the grid
    v = [np.cos(np.pi * 1 * (i - 0.5) / 3) * np.cos(np.pi * 2 * (j - 0.5) / 3)
         for i in range(1, 4) for j in range(1, 4)]
    assert numpy_check(rec.graph, 4, v)
    rec = check(product_eigenpair(C3, 0, (1, 1, 1), K2, 2, (1, -1)), 2)


def test_complement_examples():
    g35 = catalog_graph("6.35")
    lam = QuadraticNumber(3, 1, 5)
    (x,) = exact_eigenspace(laplacian(g35), lam)
    rec = check(complement_eigenpair(g35, lam, x))
    assert rec.lam == QuadraticNumber(3, -1, 5)
    assert is_isomorphic(rec.graph, catalog_graph("6.101"))
    deg = complement_eigenpair(clique(4), 4, (1, -1, 0, 0))
    assert deg.verified and "degenerate-zero-eigenvalue" in deg.flags
    c5 = cycle(5)
    lam = QuadraticNumber(Fraction(5, 2), Fraction(-1, 2), 5)
    (x,) = exact_eigenspace(laplacian(c5), lam)[:1]
    rec = check(complement_eigenpair(c5, lam, x))
    assert rec.lam == QuadraticNumber(Fraction(5, 2), Fraction(1, 2), 5)


def test_antisymmetric_pairings():
    assert antisymmetric_pairings((1, -1, 1, -1)) == [((1, 2), (3, 4)), ((1, 4), (2, 3))]
    assert antisymmetric_pairings((1, 0, -1)) == [((1, 3),)]
    assert antisymmetric_pairings((1, -2, 1)) == []


def test_script_runner():
    recs = run_script(K2, 2, (1, -1), "ADDSOFT\n# comment\nART 3\n")
    assert [r.kind for r in recs] == ["AddGlobalSoftNode", "Articulation"]
    assert recs[-1].lam == 3 and all(r.verified for r in recs)
    recs = run_script(C3, 1, (1, 0, -1), "EXPAND 1 2 0\nLINK 1 2\nART 3")
    assert all(r.verified for r in recs)
    with pytest.raises(TransformError):
        run_script(C3, 1, (1, 0, -1), "FOO 1")
    with pytest.raises(TransformError):
        run_script(C3, 1, (1, 0, -1), "LINK 1")


FAMILY = [e for lam in (1, 2, 3) for e in lambda_soft_family(lam, 5)]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FAMILY), st.data())
def test_random_preserving_moves(entry, data):
    g, lam = entry.graph, entry.lam
    x = data.draw(st.sampled_from(entry.vectors()))
    zeros = [k + 1 for k, v in enumerate(x) if not v]
    equal = [(i, j) for i, j in itertools.combinations(range(1, g.n + 1), 2) if x[i - 1] == x[j - 1]]
    opposite = [e for e in g.edges if x[e[0] - 1] == -x[e[1] - 1] and x[e[0] - 1]]
    move = data.draw(st.sampled_from(["link", "art", "square", "join"]))
    if move == "link":
        assume(equal)
        rec = link_toggle(g, lam, x, *data.draw(st.sampled_from(equal)))
    elif move == "art":
        assume(zeros)
        rec = articulation(g, lam, x, data.draw(st.sampled_from(zeros)))
    elif move == "square":
        assume(opposite)
        rec = square_gadget(g, lam, x, *data.draw(st.sampled_from(opposite)))
    else:
        i = data.draw(st.integers(1, g.n))
        assume(x[i - 1])
        rec = link_join(g, lam, x, i, g, lam, x, i)
    check(rec, lam)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FAMILY), st.data())
def test_random_shifting_moves(entry, data):
    g, lam = entry.graph, entry.lam
    x = data.draw(st.sampled_from(entry.vectors()))
    check(add_global_soft_node(g, lam, x), lam + 1)
    check(complement_eigenpair(g, lam, x), g.n - lam)
    for pairs in antisymmetric_pairings(x)[:3]:
        check(insert_soft_nodes(g, lam, x, pairs), lam + 1)
        if not any(g.has_edge(*p) for p in pairs):
            check(matching_toggle(g, lam, x, pairs, "add"), lam + 2)


def test_record_reports_shift():
    rec = add_global_soft_node(K2, 2, (1, -1))
    assert rec.input_lam == 2 and rec.shift == 1
    assert matvec(laplacian(rec.graph), list(rec.vector)) == [3, -3, 0]
