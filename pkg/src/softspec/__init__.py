"""Exact Laplacian spectra, soft nodes and eigenvalue-preserving graph transforms."""
from __future__ import annotations

from .graph import Graph, build_graph, laplacian
from .qfield import QuadraticNumber
from .spectra import Eigenvalue, classify_spectrum, soft_nodes

__version__ = "0.1.0"

__all__ = ["Eigenvalue", "Graph", "QuadraticNumber", "build_graph", "classify_spectrum", "laplacian",
           "soft_nodes", "__version__"]
