"""Integer polynomials: characteristic polynomials, integer roots, small-degree factors."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    """Coefficients a_0..a_n (lowest degree first), trailing zeros stripped."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> IntPolynomial:
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if self.is_zero or other.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __pow__(self, k: int) -> IntPolynomial:
        out = IntPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial] | None:
        """Exact division by a monic (or ±1-leading) divisor; None if other is not ±1-leading."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if abs(other.leading) != 1:
            return None
        rem = list(self.coeffs)
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * other.leading
            if c:
                quot[k - dq] = c
                for i, b in enumerate(other.coeffs):
                    rem[k - dq + i] -= c * b
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:dq]))

    def exact_quotient(self, other: IntPolynomial) -> IntPolynomial | None:
        res = self.divmod(other)
        if res is None or not res[1].is_zero:
            return None
        return res[0]

    def numeric_roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.array([])
        return np.roots([float(c) for c in reversed(self.coeffs)])

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(abs(c)) if (abs(c) != 1 or k == 0) else ""
            sign = "-" if c < 0 else "+"
            terms.append((sign, coef + ("*" if coef and mono else "") + mono))
        if not terms:
            return "0"
        first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([first] + [f"{s} {t}" for s, t in terms[1:]])


def char_poly(L: Sequence[Sequence]) -> IntPolynomial:
    """det(xI - L) by Faddeev-LeVerrier in exact integer arithmetic."""
    n = len(L)
    A = []
    for row in L:
        r = []
        for v in row:
            f = Fraction(v)
            if f.denominator != 1:
                raise PolynomialError("char_poly needs an integer matrix")
            r.append(int(f))
        A.append(r)
    if n == 0:
        return IntPolynomial((1,))
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
        AM = [[sum(A[i][t] * M[t][j] for t in range(n) if A[i][t]) for j in range(n)] for i in range(n)]
        c_prev = coeffs[n - k + 1]
        M = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        tr = sum(A[i][t] * M[t][i] for i in range(n) for t in range(n))
        if tr % k:
            raise PolynomialError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = -tr // k
    return IntPolynomial(tuple(coeffs))


def _divisors(m: int) -> list[int]:
    m = abs(m)
    small = [d for d in range(1, math.isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def integer_roots(p: IntPolynomial) -> tuple[list[int], IntPolynomial]:
    """All integer roots with multiplicity (ascending) and the deflated quotient.

    Candidates are the divisors of the lowest nonzero coefficient after
    stripping powers of x (rational root lemma).
    """
    if p.is_zero:
        raise PolynomialError("zero polynomial has every root")
    roots = []
    c = list(p.coeffs)
    k = 0
    while c and c[0] == 0:
        c.pop(0)
        k += 1
    roots.extend([0] * k)
    q = IntPolynomial(tuple(c))
    if q.degree >= 1:
        for d in _divisors(q.coeffs[0]):
            for r in (d, -d):
                while q.degree >= 1 and q(r) == 0:
                    q = q.exact_quotient(IntPolynomial((-r, 1)))
                    roots.append(r)
    return sorted(roots), q


def rational_root_candidates(p: IntPolynomial) -> list[Fraction]:
    """Every p/q allowed by the rational root lemma (for the theorem check)."""
    c = list(p.coeffs)
    while c and c[0] == 0:
        c.pop(0)
    if len(c) < 2:
        return []
    out = set()
    for a in _divisors(c[0]):
        for b in _divisors(c[-1]):
            out.add(Fraction(a, b))
            out.add(Fraction(-a, b))
    return sorted(out)


@dataclass(frozen=True)
class Factor:
    poly: IntPolynomial
    multiplicity: int


def _quadratic_factor(q: IntPolynomial) -> IntPolynomial | None:
    """Trial division by monic x^2 - s x + t with real roots inside the Cauchy bound."""
    a0 = q.coeffs[0]
    if a0 == 0:
        return IntPolynomial((0, 1))
    lead = abs(q.leading)
    bound = 1 + max(abs(Fraction(c, lead)) for c in q.coeffs[:-1])
    bound = math.ceil(bound)
    for t_abs in _divisors(a0):
        if t_abs > bound * bound:
            break
        for t in (t_abs, -t_abs):
            for s in range(-2 * bound, 2 * bound + 1):
                if s * s < 4 * t:
                    continue
                cand = IntPolynomial((t, -s, 1))
                if q.exact_quotient(cand) is not None:
                    return cand
    return None


def _numeric_factor(q: IntPolynomial, deg: int) -> IntPolynomial | None:
    # Round products of numeric root subsets to integer candidates; exact
    # division confirms any hit, so numerical error can only cost a miss.
    roots = q.numeric_roots()
    for idx in itertools.combinations(range(len(roots)), deg):
        coeffs = np.real(np.poly(roots[list(idx)]))
        cand = IntPolynomial(tuple(int(round(c)) for c in reversed(coeffs)))
        if cand.degree == deg and q.exact_quotient(cand) is not None:
            return cand
    return None


def factor_integer_poly(p: IntPolynomial) -> tuple[list[int], list[Factor]]:
    """Integer roots plus the remaining irreducible factors with multiplicity.

    Order: strip x^k and integer roots, then quadratic trial division, then
    higher-degree splitting by root subsets for what is left.
    """
    roots, q = integer_roots(p)
    if q.leading < 0:
        q = IntPolynomial(tuple(-c for c in q.coeffs))
    factors: dict[tuple[int, ...], int] = {}
    while q.degree >= 2:
        f = _quadratic_factor(q) if q.degree >= 4 or q.degree == 2 else None
        if f is None and q.degree == 2:
            f = q
        if f is None:
            for deg in range(3, q.degree // 2 + 1):
                f = _numeric_factor(q, deg)
                if f is not None:
                    break
        if f is None:
            f = q
        while q.degree >= f.degree and (nq := q.exact_quotient(f)) is not None:
            factors[f.coeffs] = factors.get(f.coeffs, 0) + 1
            q = nq
    if q.degree == 1:
        raise PolynomialError("unexpected linear factor after integer deflation")
    out = [Factor(IntPolynomial(c), m) for c, m in factors.items()]
    out.sort(key=lambda f: (f.poly.degree, f.poly.coeffs))
    return roots, out


def bisect_roots(f: IntPolynomial, tol: float = 1e-13) -> list[float]:
    """Simple real roots of a square-free polynomial refined by bisection."""
    approx = sorted(r.real for r in f.numeric_roots())
    out = []
    for k, r in enumerate(approx):
        gap = min([abs(r - s) for j, s in enumerate(approx) if j != k] + [1.0]) / 2
        lo, hi = r - gap * 0.999, r + gap * 0.999
        flo, fhi = float(f(Fraction(lo))), float(f(Fraction(hi)))
        if flo == 0:
            out.append(lo)
            continue
        if flo * fhi > 0:
            out.append(r)
            continue
        while hi - lo > tol * max(1.0, abs(lo)):
            mid = (lo + hi) / 2
            fm = f(Fraction(mid))
            if fm == 0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo = mid
            else:
                hi = mid
        out.append((lo + hi) / 2)
    return out
