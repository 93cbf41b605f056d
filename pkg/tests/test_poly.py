from __future__ import annotations

import itertools

import sympy
from hypothesis import given, settings, strategies as st

from softspec.graph import all_connected_graphs, build_graph, chain, clique
from softspec.poly import IntPolynomial, char_poly, factor_integer_poly, integer_roots, rational_root_candidates
from softspec.spectra import graph_char_poly

from conftest import sympy_laplacian

x = sympy.Symbol("x")


def as_sympy(p: IntPolynomial):
    return sum(c * x ** k for k, c in enumerate(p.coeffs))


def test_small_examples():
    assert graph_char_poly(build_graph(2, [(1, 2)])).coeffs == (0, -2, 1)
    assert graph_char_poly(chain(3)).coeffs == (0, 3, -4, 1)
    assert graph_char_poly(clique(4)) == IntPolynomial.from_roots([0, 4, 4, 4])


def test_char_poly_matches_sympy_for_all_graphs_up_to_five():
    for g in all_connected_graphs(5):
        assert sympy.expand(as_sympy(graph_char_poly(g)) - sympy_laplacian(g).charpoly(x).as_expr()) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.data())
def test_char_poly_random_graphs(n, data):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    g = build_graph(n, edges)
    p = graph_char_poly(g)
    assert sympy.expand(as_sympy(p) - sympy_laplacian(g).charpoly(x).as_expr()) == 0
    # disconnected graphs still have 0 as a root
    assert p.coeffs[0] == 0


def test_integer_roots_and_candidates():
    roots, rest = integer_roots(IntPolynomial.from_roots([0, 1, 3]))
    assert sorted(roots) == [0, 1, 3] and rest.degree == 0
    cands = rational_root_candidates(IntPolynomial((3, 0, 2)))
    assert {c.denominator for c in cands} <= {1, 2}


def test_factorization_reconstructs_polynomial():
    for g in all_connected_graphs(6)[::7]:
        p = graph_char_poly(g)
        roots, factors = factor_integer_poly(p)
        prod = IntPolynomial.from_roots(roots)
        for f in factors:
            for _ in range(f.multiplicity):
                prod = prod * f.poly
        assert prod.coeffs == p.coeffs or tuple(-c for c in prod.coeffs) == p.coeffs
        for f in factors:
            assert sympy.Poly(as_sympy(f.poly), x).is_irreducible


def test_char_poly_of_weighted_matrix():
    p = char_poly([[1, -1], [-1, 1]])
    assert p.coeffs == (0, -2, 1)
