from __future__ import annotations

import math

import numpy as np
import pytest
import sympy

from softspec.graph import build_graph, chain, cycle, laplacian
from softspec.special import (SizeError, bipartite_spectrum, chain_soft_condition, chain_spectrum, clique_spectrum,
                              cycle_spectrum, cycle_zero_counts, multipartite_spectrum, star_spectrum, two_cos)
from softspec.spectra import numeric_values, soft_nodes


def multiset(pairs):
    return sorted(float(p.value) for p in pairs)


def test_clique_and_star():
    assert multiset(clique_spectrum(4)) == [0, 4, 4, 4]
    s = star_spectrum(5)
    assert multiset(s) == [0, 1, 1, 1, 5]
    top = [p for p in s if p.value == 5][0]
    assert top.vector == (4, -1, -1, -1, -1)


def test_multipartite_multiplicities():
    assert multiset(multipartite_spectrum([2, 2, 2])) == [0, 4, 4, 4, 6, 6]
    assert multiset(bipartite_spectrum(2, 3)) == [0, 2, 2, 3, 5]


def test_cycle_and_chain():
    c4 = cycle_spectrum(4)
    assert np.allclose(multiset(c4), [0, 2, 2, 4])
    top = [p for p in c4 if abs(float(p.value) - 4) < 1e-12][0]
    v = np.array(top.vector)
    assert np.allclose(v / v[0], [1, -1, 1, -1])
    assert np.allclose(multiset(chain_spectrum(2)), [0, 2])


@pytest.mark.parametrize("n", range(3, 13))
def test_closed_forms_against_numpy(n):
    for fam, g in ((cycle_spectrum(n), cycle(n)), (chain_spectrum(n), chain(n))):
        ref = np.linalg.eigvalsh(np.array([[float(v) for v in r] for r in laplacian(g)]))
        got = multiset(fam)
        assert all(min(abs(x - r) for r in ref) < 1e-9 for x in got)
        assert max(p.residual for p in fam) < 1e-9


def test_two_cos_matches_sympy():
    for N in range(1, 25):
        for j in range(N):
            v = two_cos(j, N)
            ref = 2 * sympy.cos(2 * sympy.pi * j / N)
            deg = sympy.minimal_polynomial(ref, sympy.Symbol("t")).as_poly().degree()
            if deg <= 2:
                assert v is not None
                sv = sympy.Integer(v) if isinstance(v, int) else (
                    sympy.Rational(v.a.numerator, v.a.denominator)
                    + sympy.Rational(v.b.numerator, v.b.denominator) * sympy.sqrt(v.d))
                assert sympy.simplify(sv - ref) == 0
            else:
                assert v is None


def chain_soft_numeric(n, k):
    # zeros of the closed-form eigenvector, independent of the parity formula
    v = [math.cos(math.pi * (k - 1) * (j - 0.5) / n) for j in range(1, n + 1)]
    return tuple(j for j in range(1, n + 1) if abs(v[j - 1]) < 1e-12)


@pytest.mark.parametrize("n", range(2, 13))
def test_chain_soft_condition_matches_zeros(n):
    for k in range(1, n + 1):
        assert chain_soft_condition(n, k) == chain_soft_numeric(n, k)


def test_chain_soft_condition_examples():
    assert all(chain_soft_condition(8, k) == () for k in range(1, 9))
    assert chain_soft_condition(5, 3) == ()
    for p in (3, 5, 7, 11):
        assert chain_soft_condition(p, 2) == ((p + 1) // 2,)


def test_chain_soft_condition_agrees_with_exact_soft_nodes():
    # exact soft sets over Q(sqrt 5) for the chain on 5 vertices
    from softspec.spectra import classify_spectrum
    vals = sorted((e for e in classify_spectrum(chain(5)) if e.approx > 0), key=lambda e: e.approx)
    for k, e in enumerate(vals, start=2):
        assert soft_nodes(chain(5), e).soft == chain_soft_condition(5, k)


def test_cycle_zero_counts():
    # vectors with n/2 zeros only occur when 4 divides n
    for n in range(3, 13):
        m = max(cycle_zero_counts(n))
        if n % 4 == 0:
            assert m == n // 2
        else:
            assert m < n / 2
    assert {n: max(cycle_zero_counts(n)) for n in (6, 9, 10)} == {6: 2, 9: 3, 10: 2}


def test_size_errors():
    with pytest.raises(SizeError):
        star_spectrum(1)
    with pytest.raises(SizeError):
        multipartite_spectrum([])
    with pytest.raises(SizeError):
        chain_soft_condition(3, 0)


def test_star_matches_numeric():
    for n in range(2, 13):
        assert np.allclose(multiset(star_spectrum(n)), numeric_values(build_graph(n, [(1, k) for k in range(2, n + 1)])),
                           atol=1e-9)
