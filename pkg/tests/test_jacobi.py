from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from softspec.catalog import catalog_graph
from softspec.graph import build_graph, laplacian
from softspec.jacobi import JacobiError, jacobi_eigh
from softspec.spectra import numeric_values


@settings(max_examples=100, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 9), st.just(1)),
              elements=st.floats(-10, 10, allow_nan=False)).flatmap(
    lambda c: arrays(float, (c.shape[0], c.shape[0]), elements=st.floats(-10, 10, allow_nan=False))))
def test_matches_numpy_eigh(a):
    s = (a + a.T) / 2
    w, V = jacobi_eigh(s)
    ref = np.linalg.eigvalsh(s)
    scale = max(1.0, np.abs(s).max())
    assert np.allclose(w, ref, atol=1e-9 * scale)
    assert np.allclose(V.T @ V, np.eye(len(s)), atol=1e-9)
    assert np.allclose(s @ V, V * w, atol=1e-8 * scale)
    assert np.all(np.diff(w) >= -1e-12)


def test_small_examples():
    assert np.allclose(numeric_values(build_graph(2, [(1, 2)])), [0, 2])
    vals = numeric_values(catalog_graph("6.35"))
    assert np.allclose(vals, [0, 0.7639, 3, 4, 5, 5.2361], atol=1e-3)


def test_rejects_bad_matrices():
    with pytest.raises(JacobiError):
        jacobi_eigh([[1, 2], [0, 1]])
    with pytest.raises(JacobiError):
        jacobi_eigh(np.zeros((2, 3)))


def test_laplacian_input():
    w, _ = jacobi_eigh(laplacian(build_graph(3, [(1, 2), (2, 3)])))
    assert np.allclose(w, [0, 1, 3], atol=1e-12)
