from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from softspec.catalog import catalog_graph
from softspec.graph import all_connected_graphs, build_graph, chain, clique, complete_multipartite, cycle, laplacian, star
from softspec.qfield import QuadraticNumber
from softspec.spectra import (INTEGER, NUMERIC, QUADRATIC, SOFT_TOL, VERIFY_TOL, Eigenvalue, SpectrumError,
                              classify_spectrum, eigenpairs, exact_eigenspace, expand_multiset, full_eigenpairs,
                              merris_degree_zero_check, numeric_values, rational_eigenspace,
                              rational_root_violations, soft_eigenvalues, soft_nodes)

from conftest import sympy_laplacian

x = sympy.Symbol("x")


def test_tolerances():
    assert SOFT_TOL == 1e-7
    assert VERIFY_TOL == 1e-9


def values(g):
    return {str(e) for e in classify_spectrum(g)}


def test_named_irrational_values():
    assert {"3 - sqrt(2)", "3 + sqrt(2)"} <= values(catalog_graph("5.16"))
    assert {"(7 - sqrt(5))/2", "(7 + sqrt(5))/2"} <= values(catalog_graph("5.21"))
    assert {"(5 - sqrt(13))/2", "(5 + sqrt(13))/2"} <= values(catalog_graph("5.24"))
    assert values(chain(5)) == {"0", "(5 - sqrt(5))/2", "(3 - sqrt(5))/2", "(3 + sqrt(5))/2", "(5 + sqrt(5))/2"}


def test_integer_part_of_5_16():
    ints = sorted(e.value for e in classify_spectrum(catalog_graph("5.16")) if e.kind == INTEGER)
    assert ints == [0, 3, 5]


def test_bipartite_multiset():
    spec = classify_spectrum(complete_multipartite([2, 3]))
    assert expand_multiset(spec) == [0, 2, 2, 3, 5]


def test_classification_matches_sympy_up_to_five():
    for g in all_connected_graphs(5):
        ref = sympy_laplacian(g).eigenvals()
        spec = classify_spectrum(g)
        assert sum(e.multiplicity for e in spec) == g.n
        got = sorted((e.approx, e.multiplicity) for e in spec)
        want = sorted((float(sympy.re(sympy.N(k, 30))), m) for k, m in ref.items())
        assert len(got) == len(want)
        for (a, ma), (b, mb) in zip(got, want):
            assert ma == mb and abs(a - b) < 1e-9
        for e in spec:
            if e.kind in (INTEGER, QUADRATIC):
                val = e.exact()
                sv = sympy.Rational(val) if not isinstance(val, QuadraticNumber) else (
                    sympy.Rational(val.a.numerator, val.a.denominator)
                    + sympy.Rational(val.b.numerator, val.b.denominator) * sympy.sqrt(val.d))
                assert any(sympy.simplify(sv - k) == 0 for k in ref)


def test_numeric_kind_polynomials_are_irreducible():
    seen = 0
    for g in all_connected_graphs(6):
        for e in classify_spectrum(g):
            if e.kind == NUMERIC:
                seen += 1
                p = e.factor
                assert p.degree >= 3
                assert sympy.Poly(sum(c * x ** k for k, c in enumerate(p.coeffs)), x).is_irreducible
                assert abs(float(p(e.approx))) < 1e-6 * max(1, max(abs(c) for c in p.coeffs))
    assert seen > 0


def test_no_noninteger_rational_eigenvalues_up_to_six():
    graphs = all_connected_graphs(6)
    assert len(graphs) == 143
    assert all(rational_root_violations(g) == [] for g in graphs)


def test_nonzero_eigenvectors_sum_to_zero():
    for g in all_connected_graphs(5):
        for p in full_eigenpairs(g):
            if float(p.value) != 0:
                if p.exact:
                    assert sum(p.vector) == 0
                else:
                    assert abs(sum(p.vector)) < 1e-9


def test_eigenspaces():
    b = exact_eigenspace(laplacian(clique(3)), Fraction(3))
    assert len(b) == 2
    assert rational_eigenspace(chain(3), 1) == [(1, 0, -1)]
    assert len(rational_eigenspace(star(4), 1)) == 2
    with pytest.raises(SpectrumError):
        rational_eigenspace(chain(3), 2)


def test_quadratic_eigenspace_is_exact():
    lam = QuadraticNumber(3, -1, 2)
    (v,) = exact_eigenspace(laplacian(catalog_graph("5.16")), lam)
    L = laplacian(catalog_graph("5.16"))
    assert all(sum(L[i][j] * v[j] for j in range(5)) == lam * v[i] for i in range(5))


def test_soft_nodes_examples():
    assert soft_nodes(cycle(4), 2).soft == (1, 2, 3, 4)
    rep = soft_nodes(chain(3), 1)
    assert rep.soft == (2,) and rep.witnesses[2] == (1, 0, -1)
    assert soft_nodes(clique(3), 3).soft == (1, 2, 3)


def test_soft_node_quadratic_5_24():
    lam = QuadraticNumber(Fraction(5, 2), Fraction(1, 2), 13)
    rep = soft_nodes(catalog_graph("5.24"), lam)
    assert 5 in rep.soft
    w = np.array([float(v) for v in rep.witnesses[5]])
    ref = np.array([-0.2, 0.67, -0.67, 0.2, 0.0])
    w, ref = w / np.linalg.norm(w), ref / np.linalg.norm(ref)
    assert min(np.abs(w - ref).max(), np.abs(w + ref).max()) < 1e-2


def test_soft_nodes_numeric_eigenvalue():
    # cross-check the numeric route against the exact one on a quadratic value
    g = catalog_graph("5.16")
    exact = soft_nodes(g, QuadraticNumber(3, 1, 2)).soft
    numeric = soft_nodes(g, 3 + math.sqrt(2)).soft
    assert exact == numeric


def test_soft_nodes_rejects_non_eigenvalue():
    with pytest.raises(SpectrumError):
        soft_nodes(chain(3), 2)


def test_soft_eigenvalues_listing():
    out = soft_eigenvalues(chain(3))
    assert [(str(e), s) for e, s in out] == [("1", (2,))]


def test_merris_theorem():
    assert merris_degree_zero_check(star(5)) == []
    assert merris_degree_zero_check(clique(4)) == []
    assert all(merris_degree_zero_check(g) == [] for g in all_connected_graphs(6))


def test_eigenvalue_helpers():
    e = Eigenvalue.quadratic(7, 1, 5, 2)
    assert str(e) == "(7 + sqrt(5))/2"
    assert e.minimal_polynomial().coeffs == (44, -28, 4)
    assert Eigenvalue.from_exact(Fraction(4)).kind == INTEGER
    ps = eigenpairs(chain(3), 3)
    assert len(ps) == 1 and ps[0].vector == (1, -2, 1)


def test_numeric_values_match_numpy():
    for g in all_connected_graphs(6)[::5]:
        ref = np.linalg.eigvalsh(np.array([[float(v) for v in r] for r in laplacian(g)]))
        assert np.allclose(numeric_values(g), ref, atol=1e-9)
