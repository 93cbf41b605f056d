"""Cyclic Jacobi eigensolver for small dense symmetric matrices."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class JacobiError(ValueError):
    pass


def jacobi_eigh(a: Sequence[Sequence[float]], rel_tol: float = 1e-12,
                max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns).

    Sweeps rotate every off-diagonal pair in row order until the
    off-diagonal Frobenius norm drops below ``rel_tol * ||A||_F``.
    """
    A = np.array([[float(v) for v in row] for row in a], dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise JacobiError("matrix must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max(initial=0))):
        raise JacobiError("matrix must be symmetric")
    V = np.eye(n)
    scale = np.linalg.norm(A)
    target = rel_tol * scale

    mask = ~np.eye(n, dtype=bool)

    def off(M):
        return float(np.sqrt(np.sum(M[mask] ** 2)))

    for _ in range(max_sweeps):
        if off(A) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise JacobiError(f"no convergence after {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
