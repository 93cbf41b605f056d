"""Exact dense linear algebra over Q or Q(sqrt(d)).

Matrices are lists of row lists. Entries may be ints, Fractions or
QuadraticNumbers; anything supporting field arithmetic and truthiness
(zero is falsy) works.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .qfield import QuadraticNumber


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns (matrix, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [v / inv if v else v for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None, one=Fraction(1)) -> list[list]:
    """Basis of {x : A x = 0}, one vector per free column, from the RREF."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[one if k == j else one * 0 for k in range(ncols)] for j in range(ncols)]
    m, pivots = rref([[_lift(v, one) for v in r] for r in rows], ncols)
    zero = one * 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for i, pc in enumerate(pivots):
            x[pc] = -m[i][f]
        basis.append(x)
    return basis


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, one=Fraction(1)):
    """One particular solution of A x = rhs and the nullspace of A, or None if inconsistent."""
    ncols = len(rows[0])
    aug = [[_lift(v, one) for v in r] + [_lift(b, one)] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    zero = one * 0
    x = [zero] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = m[i][ncols]
    return x, nullspace(rows, ncols, one)


def rank(rows: Sequence[Sequence], one=Fraction(1)) -> int:
    if not rows:
        return 0
    return len(rref([[_lift(v, one) for v in r] for r in rows])[1])


def _lift(v, one):
    if isinstance(one, QuadraticNumber) and not isinstance(v, QuadraticNumber):
        return QuadraticNumber(v, 0, one.d)
    if isinstance(v, int):
        return Fraction(v)
    return v


def matvec(a: Sequence[Sequence], x: Sequence) -> list:
    return [sum((aij * xj for aij, xj in zip(row, x) if aij), 0 * x[0] if x else 0) for row in a]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), 0) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def identity(n: int, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def shift(a, lam):
    """A - lam*I."""
    return [[v - lam if i == j else v for j, v in enumerate(row)] for i, row in enumerate(a)]


def field_one(*values) -> Fraction | QuadraticNumber:
    """Multiplicative identity of the smallest field containing ``values``."""
    for v in values:
        if isinstance(v, QuadraticNumber) and v.b:
            return QuadraticNumber(1, 0, v.d)
    return Fraction(1)


def normalize_rational(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for k in ints:
        g = math.gcd(g, k)
    if g == 0:
        return tuple(ints)
    ints = [k // g for k in ints]
    first = next(k for k in ints if k)
    if first < 0:
        ints = [-k for k in ints]
    return tuple(ints)


def normalize_quadratic(v: Sequence[QuadraticNumber]) -> tuple[QuadraticNumber, ...]:
    """Scale so the first nonzero entry is 1, then clear denominators and common factors."""
    first = next(x for x in v if x)
    w = [x / first for x in v]
    parts = [Fraction(p) for x in w for p in (x.a, x.b)]
    den = 1
    for x in parts:
        den = den * x.denominator // math.gcd(den, x.denominator)
    g = 0
    for x in parts:
        g = math.gcd(g, int(x * den))
    scale = Fraction(den, g or 1)
    return tuple(x * scale for x in w)


def normalize_exact(v: Sequence) -> tuple:
    if any(isinstance(x, QuadraticNumber) and x.b for x in v):
        d = next(x.d for x in v if isinstance(x, QuadraticNumber) and x.b)
        return normalize_quadratic([x if isinstance(x, QuadraticNumber) else QuadraticNumber(x, 0, d) for x in v])
    return tuple(Fraction(k) for k in normalize_rational(
        [x.a if isinstance(x, QuadraticNumber) else x for x in v]))
