"""Closed-form spectra of cliques, stars, complete multipartite graphs, cycles and chains."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import chain, clique, complete_multipartite, cycle, laplacian, star
from .linalg import normalize_rational
from .qfield import QuadraticNumber
from .spectra import EigenPair, _residual, exact_residual_zero


class SizeError(ValueError):
    pass


def _check(n: int, least: int = 1):
    if not isinstance(n, int) or n < least:
        raise SizeError(f"size must be an integer >= {least}, got {n!r}")


def _unit(n: int, k: int) -> list[int]:
    return [1 if i == k else 0 for i in range(n)]


def _exact_pairs(g, items) -> list[EigenPair]:
    L = laplacian(g)
    out = []
    for lam, vec in items:
        v = normalize_rational(vec)
        if not exact_residual_zero(L, lam, v):
            raise AssertionError(f"closed form failed at lambda={lam}")
        out.append(EigenPair(lam, tuple(Fraction(x) for x in v), 0.0, True))
    return out


def clique_spectrum(n: int) -> list[EigenPair]:
    """0 with the ones vector; n with e1 - ek for k = 2..n."""
    _check(n)
    items = [(0, [1] * n)]
    for k in range(1, n):
        items.append((n, [a - b for a, b in zip(_unit(n, 0), _unit(n, k))]))
    return _exact_pairs(clique(n), items)


def star_spectrum(n: int) -> list[EigenPair]:
    """Centre is vertex 1. Eigenvalue n uses (n-1)e1 - sum_{k>=2} ek."""
    _check(n, 2)
    items = [(0, [1] * n)]
    for k in range(2, n):
        items.append((1, [a - b for a, b in zip(_unit(n, 1), _unit(n, k))]))
    items.append((n, [n - 1] + [-1] * (n - 1)))
    return _exact_pairs(star(n), items)


def multipartite_spectrum(parts: Sequence[int]) -> list[EigenPair]:
    """0^1, (n - n_i)^(n_i - 1) for each part, n^(p - 1)."""
    parts = list(parts)
    if not parts or any(not isinstance(p, int) or p < 1 for p in parts):
        raise SizeError("parts must be a nonempty list of positive integers")
    n = sum(parts)
    starts = [sum(parts[:i]) for i in range(len(parts))]
    items = [(0, [1] * n)]
    for s, size in zip(starts, parts):
        for t in range(1, size):
            items.append((n - size, [a - b for a, b in zip(_unit(n, s), _unit(n, s + t))]))
    ind = [[1 if s <= v < s + size else 0 for v in range(n)] for s, size in zip(starts, parts)]
    for i in range(1, len(parts)):
        items.append((n, [parts[i] * a - parts[0] * b for a, b in zip(ind[0], ind[i])]))
    items.sort(key=lambda it: it[0])
    return _exact_pairs(complete_multipartite(parts), items)


def bipartite_spectrum(n1: int, n2: int) -> list[EigenPair]:
    return multipartite_spectrum([n1, n2])


# --------------------------------------------------------------------------
# exact values of 2 cos(2 pi j / N)

def two_cos(j: int, N: int):
    """2cos(2*pi*j/N) as an int or QuadraticNumber when it has degree <= 2, else None."""
    g = math.gcd(j, N)
    Nr = N // g
    approx = 2 * math.cos(2 * math.pi * j / N)
    rational = {1: 2, 2: -2, 3: -1, 4: 0, 6: 1}
    if Nr in rational:
        return rational[Nr]
    cands = {
        5: [QuadraticNumber(Fraction(s1, 2), Fraction(s2, 2), 5) for s1 in (1, -1) for s2 in (1, -1)],
        10: [QuadraticNumber(Fraction(s1, 2), Fraction(s2, 2), 5) for s1 in (1, -1) for s2 in (1, -1)],
        8: [QuadraticNumber(0, s, 2) for s in (1, -1)],
        12: [QuadraticNumber(0, s, 3) for s in (1, -1)],
    }.get(Nr)
    if cands is None:
        return None
    best = min(cands, key=lambda c: abs(float(c) - approx))
    if abs(float(best) - approx) > 1e-12:
        raise AssertionError("cosine table inconsistent")
    return best


def _value(j: int, N: int):
    """2 - 2cos(2 pi j / N) exactly if possible, else as a float."""
    c = two_cos(j, N)
    if c is None:
        return 2 - 2 * math.cos(2 * math.pi * j / N)
    return 2 - c


def _numeric_pairs(g, items) -> list[EigenPair]:
    L = laplacian(g)
    out = []
    for lam, vec in items:
        v = np.asarray(vec, dtype=float)
        v = v / np.linalg.norm(v)
        first = next((x for x in v if abs(x) > 1e-12), 1.0)
        if first < 0:
            v = -v
        out.append(EigenPair(lam, tuple(float(x) for x in v), _residual(L, lam, v), exact=False))
    out.sort(key=lambda p: float(p.value))
    return out


def cycle_spectrum(n: int) -> list[EigenPair]:
    """mu_k = 4 sin^2((k-1) pi / n) with the real vectors w^k and x^k.

    x^k_j = cos((j-1) a_k), w^k_j = sin((j-1) a_k), a_k = 2 (k-1) pi / n.
    Only k = 1..floor(n/2)+1 are emitted since k and n+2-k repeat.
    """
    _check(n, 3)
    items = []
    for k in range(1, n // 2 + 2):
        a = 2 * (k - 1) * math.pi / n
        lam = _value(k - 1, n)
        x = [math.cos(j * a) for j in range(n)]
        items.append((lam, x))
        if 2 * (k - 1) % n:
            items.append((lam, [math.sin(j * a) for j in range(n)]))
    return _numeric_pairs(cycle(n), items)


def chain_spectrum(n: int) -> list[EigenPair]:
    """lambda_k = 4 sin^2(pi (k-1) / 2n), v^k_j = cos(pi (k-1)(j - 1/2) / n)."""
    _check(n, 1)
    items = []
    for k in range(1, n + 1):
        lam = _value(k - 1, 2 * n)
        items.append((lam, [math.cos(math.pi * (k - 1) * (j - 0.5) / n) for j in range(1, n + 1)]))
    return _numeric_pairs(chain(n), items)


def chain_soft_condition(n: int, k: int) -> tuple[int, ...]:
    """Vertices j with (k-1)(2j-1) = n(1+2m) for some integer m >= 0."""
    if not (1 <= k <= n):
        raise SizeError("need 1 <= k <= n")
    out = []
    for j in range(1, n + 1):
        lhs = (k - 1) * (2 * j - 1)
        if lhs and lhs % n == 0 and (lhs // n) % 2 == 1:
            out.append(j)
    return tuple(out)


def cycle_zero_counts(n: int, tol: float = 1e-9) -> list[int]:
    return [sum(1 for x in p.vector if abs(x) < tol) for p in cycle_spectrum(n)]
