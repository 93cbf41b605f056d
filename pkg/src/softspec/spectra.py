"""Exact Laplacian spectra: eigenvalue classification, eigenspaces, soft nodes.

Integer and quadratic eigenvalues are handled in exact arithmetic (Fractions
and ``QuadraticNumber``); eigenvalues whose minimal polynomial has degree 3 or
more are carried numerically together with that polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .graph import Graph, laplacian
from .jacobi import jacobi_eigh
from .linalg import field_one, matvec, normalize_exact, nullspace, shift
from .poly import IntPolynomial, bisect_roots, char_poly, factor_integer_poly
from .qfield import QuadraticNumber, squarefree_split

Exact = Union[int, Fraction, QuadraticNumber]

INTEGER = "Integer"
QUADRATIC = "QuadraticIrrational"
NUMERIC = "NumericIrrational"
RATIONAL = "Rational"  # only ever produced for weighted matrices

SOFT_TOL = 1e-7
VERIFY_TOL = 1e-9


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class Eigenvalue:
    """One distinct eigenvalue with its multiplicity.

    ``value`` is an int (Integer), a ``(p, q, d, r)`` tuple meaning
    (p + q*sqrt(d))/r (QuadraticIrrational), a Fraction (Rational) or a float
    (NumericIrrational, with ``factor`` holding its irreducible polynomial).
    """

    kind: str
    value: object
    multiplicity: int = 1
    approx: float = 0.0
    factor: IntPolynomial | None = None

    @classmethod
    def integer(cls, v: int, multiplicity: int = 1) -> Eigenvalue:
        return cls(INTEGER, int(v), multiplicity, float(v))

    @classmethod
    def quadratic(cls, p: int, q: int, d: int, r: int, multiplicity: int = 1) -> Eigenvalue:
        g = math.gcd(math.gcd(p, q), r)
        if r < 0:
            g = -g
        p, q, r = p // g, q // g, r // g
        approx = (p + q * math.sqrt(d)) / r
        return cls(QUADRATIC, (p, q, d, r), multiplicity, approx)

    @classmethod
    def from_exact(cls, x: Exact, multiplicity: int = 1) -> Eigenvalue:
        if isinstance(x, QuadraticNumber) and x.b:
            den = x.a.denominator * x.b.denominator // math.gcd(x.a.denominator, x.b.denominator)
            return cls.quadratic(int(x.a * den), int(x.b * den), x.d, den, multiplicity)
        if isinstance(x, QuadraticNumber):
            x = x.a
        x = Fraction(x)
        if x.denominator == 1:
            return cls.integer(int(x), multiplicity)
        return cls(RATIONAL, x, multiplicity, float(x))

    @property
    def is_exact(self) -> bool:
        return self.kind != NUMERIC

    def exact(self) -> Exact | None:
        """The value as an int/Fraction/QuadraticNumber, or None for numeric kinds."""
        if self.kind == INTEGER:
            return self.value
        if self.kind == RATIONAL:
            return self.value
        if self.kind == QUADRATIC:
            p, q, d, r = self.value
            return QuadraticNumber(Fraction(p, r), Fraction(q, r), d)
        return None

    def __float__(self):
        return float(self.approx)

    def minimal_polynomial(self) -> IntPolynomial:
        if self.kind == INTEGER:
            return IntPolynomial((-self.value, 1))
        if self.kind == QUADRATIC:
            p, q, d, r = self.value
            return IntPolynomial((p * p - q * q * d, -2 * p * r, r * r))
        if self.kind == RATIONAL:
            return IntPolynomial((-self.value.numerator, self.value.denominator))
        return self.factor

    def __str__(self):
        if self.kind == QUADRATIC:
            p, q, d, r = self.value
            sign = "+" if q > 0 else "-"
            qs = "" if abs(q) == 1 else str(abs(q))
            body = f"{p} {sign} {qs}sqrt({d})" if p else f"{'-' if q < 0 else ''}{qs}sqrt({d})"
            return body if r == 1 else f"({body})/{r}"
        if self.kind == NUMERIC:
            return f"{self.approx:.10g}"
        return str(self.value)


@dataclass(frozen=True)
class EigenPair:
    """An eigenvalue with one eigenvector and its residual max|Lx - lambda x|."""

    value: object
    vector: tuple
    residual: float = 0.0
    exact: bool = True

    @property
    def approx(self) -> float:
        return float(self.value)

    def float_vector(self) -> np.ndarray:
        return np.array([float(v) for v in self.vector])


@dataclass
class SoftNodeReport:
    graph: Graph
    eigenvalue: object
    multiplicity: int
    soft: tuple[int, ...]
    witnesses: dict[int, tuple] = field(default_factory=dict)
    residuals: dict[int, float] = field(default_factory=dict)
    exact: bool = True


# --------------------------------------------------------------------------
# characteristic polynomial and classification

def _integer_laplacian(g: Graph):
    if not g.unit_weighted:
        raise SpectrumError("exact classification needs a unit-weight graph")
    return [[int(v) for v in row] for row in laplacian(g)]


def graph_char_poly(g: Graph) -> IntPolynomial:
    return char_poly(_integer_laplacian(g))


def _quadratic_roots(f: IntPolynomial, multiplicity: int) -> list[Eigenvalue]:
    t, b, a = f.coeffs
    disc = b * b - 4 * a * t
    if disc < 0:
        raise SpectrumError(f"complex roots in a symmetric spectrum: {f}")
    s, d = squarefree_split(disc)
    if d == 1:
        raise SpectrumError(f"quadratic factor {f} is reducible")
    return [Eigenvalue.quadratic(-b, sign * s, d, 2 * a, multiplicity) for sign in (-1, 1)]


def spectrum_from_poly(p: IntPolynomial) -> list[Eigenvalue]:
    roots, factors = factor_integer_poly(p)
    out = []
    for r in sorted(set(roots)):
        out.append(Eigenvalue.integer(r, roots.count(r)))
    for fac in factors:
        if fac.poly.degree == 2:
            out.extend(_quadratic_roots(fac.poly, fac.multiplicity))
        else:
            for x in bisect_roots(fac.poly):
                out.append(Eigenvalue(NUMERIC, x, fac.multiplicity, x, fac.poly))
    out.sort(key=lambda e: e.approx)
    return out


def classify_spectrum(g: Graph, require_connected: bool = True) -> list[Eigenvalue]:
    """All distinct eigenvalues of L(g), ascending, with multiplicities."""
    spec = spectrum_from_poly(graph_char_poly(g))
    zero = next((e.multiplicity for e in spec if e.kind == INTEGER and e.value == 0), 0)
    if require_connected and zero != 1:
        raise SpectrumError(f"graph is disconnected: eigenvalue 0 has multiplicity {zero}")
    if sum(e.multiplicity for e in spec) != g.n:
        raise SpectrumError("multiplicities do not add up to n")
    return spec


def rational_root_violations(g: Graph) -> list[Fraction]:
    """Non-integer rational roots of any factor of the characteristic polynomial.

    Every rational-root candidate of every deflated irreducible factor is
    evaluated; a hit would contradict the integer-or-irrational theorem.
    """
    from .poly import rational_root_candidates
    roots, factors = factor_integer_poly(graph_char_poly(g))
    bad = []
    for fac in factors:
        for c in rational_root_candidates(fac.poly):
            if c.denominator != 1 and fac.poly(c) == 0:
                bad.append(c)
    return bad


def _as_exact(lam) -> Exact | None:
    if isinstance(lam, Eigenvalue):
        return lam.exact()
    if isinstance(lam, (int, Fraction, QuadraticNumber)):
        return lam
    return None


# --------------------------------------------------------------------------
# eigenspaces

def exact_eigenspace(L, lam: Exact) -> list[tuple]:
    """Basis of null(L - lam I) over Q or Q(sqrt d), normalized."""
    one = field_one(lam)
    basis = nullspace(shift(L, lam), len(L), one)
    out = [normalize_exact(v) for v in basis]
    return sorted(out, key=lambda v: [float(x) for x in v], reverse=True)


def rational_eigenspace(g: Graph, lam: int) -> list[tuple[int, ...]]:
    """Coprime integer basis of the lambda-eigenspace of L(g)."""
    L = laplacian(g)
    basis = exact_eigenspace(L, Fraction(lam))
    if not basis:
        raise SpectrumError(f"{lam} is not an eigenvalue of {g}")
    return [tuple(int(x) for x in v) for v in basis]


def numeric_eigenspace(L, lam: float, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (rows) of the numerical kernel of L - lam I."""
    M = np.array([[float(v) for v in row] for row in L]) - lam * np.eye(len(L))
    _, s, vt = np.linalg.svd(M)
    return vt[s < tol * max(1.0, s.max(initial=0.0))]


def _residual(L, lam, v) -> float:
    Lf = np.array([[float(x) for x in row] for row in L])
    vf = np.array([float(x) for x in v])
    return float(np.max(np.abs(Lf @ vf - float(lam) * vf), initial=0.0))


def exact_residual_zero(L, lam, v) -> bool:
    lv = matvec(L, list(v))
    return all(a - lam * b == 0 for a, b in zip(lv, v))


def eigenpairs(g: Graph, lam) -> list[EigenPair]:
    """Eigenpairs for one eigenvalue: exact vectors when possible."""
    L = laplacian(g)
    ex = _as_exact(lam)
    if ex is not None:
        vecs = exact_eigenspace(L, ex)
        return [EigenPair(ex, v, 0.0, True) for v in vecs]
    x = float(lam)
    out = []
    for v in numeric_eigenspace(L, x):
        v = _normalize_numeric(v)
        out.append(EigenPair(x, tuple(v), _residual(L, x, v), False))
    return out


def _normalize_numeric(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    first = next((x for x in v if abs(x) > 1e-9), 1.0)
    return v if first > 0 else -v


def full_eigenpairs(g: Graph) -> list[EigenPair]:
    out = []
    for e in classify_spectrum(g):
        out.extend(eigenpairs(g, e))
    return out


# --------------------------------------------------------------------------
# soft nodes

def soft_nodes(g: Graph, lam, tol: float = SOFT_TOL) -> SoftNodeReport:
    """Vertices s admitting an eigenvector with x_s = 0.

    With multiplicity >= 2 every vertex qualifies (two basis vectors can be
    combined to cancel any coordinate); with multiplicity 1 the vertex must
    be zero in the basis vector.
    """
    L = laplacian(g)
    ex = _as_exact(lam)
    if ex is not None:
        basis = [list(v) for v in exact_eigenspace(L, ex)]
        if not basis:
            raise SpectrumError(f"{lam} is not an eigenvalue of the graph")
        soft, wit = [], {}
        for s in range(g.n):
            v = _exact_zero_witness(basis, s)
            if v is not None:
                soft.append(s + 1)
                wit[s + 1] = v
        return SoftNodeReport(g, ex, len(basis), tuple(soft), wit, {k: 0.0 for k in wit}, True)

    x = float(lam)
    basis = numeric_eigenspace(L, x)
    if len(basis) == 0:
        raise SpectrumError(f"{lam} is not an eigenvalue of the graph")
    soft, wit, res = [], {}, {}
    for s in range(g.n):
        v = _numeric_zero_witness(basis, s, tol)
        if v is not None:
            soft.append(s + 1)
            wit[s + 1] = tuple(v)
            res[s + 1] = _residual(L, x, v)
    return SoftNodeReport(g, x, len(basis), tuple(soft), wit, res, False)


def _exact_zero_witness(basis, s):
    zero_vec = next((v for v in basis if not v[s]), None)
    if zero_vec is not None:
        return normalize_exact(zero_vec)
    if len(basis) >= 2:
        u, w = basis[0], basis[1]
        comb = [w[s] * a - u[s] * b for a, b in zip(u, w)]
        return normalize_exact(comb)
    return None


def _numeric_zero_witness(basis: np.ndarray, s: int, tol: float):
    # Unit max-norm witnesses so that tol is comparable across vectors.
    for v in basis:
        v = v / np.max(np.abs(v))
        if abs(v[s]) < tol:
            return _sign_fix(v)
    if len(basis) >= 2:
        u, w = basis[0], basis[1]
        v = w[s] * u - u[s] * w
        if np.max(np.abs(v)) > tol:
            return _sign_fix(v / np.max(np.abs(v)))
    return None


def _sign_fix(v):
    first = next((x for x in v if abs(x) > 1e-9), 1.0)
    return v if first > 0 else -v


def soft_eigenvalues(g: Graph) -> list[tuple[Eigenvalue, tuple[int, ...]]]:
    """Nonzero eigenvalues that have at least one soft node, with the soft sets."""
    out = []
    for e in classify_spectrum(g):
        if e.kind == INTEGER and e.value == 0:
            continue
        rep = soft_nodes(g, e)
        if rep.soft:
            out.append((e, rep.soft))
    return out


# --------------------------------------------------------------------------
# Merris check

def merris_degree_zero_check(g: Graph) -> list[tuple[str, int]]:
    """Violations of: eigenvectors for 0 != lambda < n vanish at degree n-1 vertices."""
    n = g.n
    full = [v for v in range(1, n + 1) if len(g.neighbors(v)) == n - 1]
    if not full:
        return []
    L = laplacian(g)
    out = []
    for e in classify_spectrum(g):
        if e.approx == 0 or not e.approx < n - 1e-12:
            continue
        ex = e.exact()
        if ex is not None:
            for v in exact_eigenspace(L, ex):
                out.extend((str(e), s) for s in full if v[s - 1])
        else:
            for v in numeric_eigenspace(L, e.approx):
                out.extend((str(e), s) for s in full if abs(v[s - 1]) > SOFT_TOL)
    return out


# --------------------------------------------------------------------------
# numeric oracle

def numeric_spectrum(L) -> list[EigenPair]:
    """Jacobi eigen-decomposition; eigenvalues ascending."""
    w, V = jacobi_eigh(L)
    Lf = np.array([[float(x) for x in row] for row in L])
    out = []
    for k in range(len(w)):
        v = _normalize_numeric(V[:, k])
        out.append(EigenPair(float(w[k]), tuple(v), float(np.max(np.abs(Lf @ v - w[k] * v))), False))
    return out


def numeric_values(g_or_L) -> list[float]:
    L = laplacian(g_or_L) if isinstance(g_or_L, Graph) else g_or_L
    return [p.value for p in numeric_spectrum(L)]


def expand_multiset(spec: Sequence[Eigenvalue]) -> list[float]:
    out = []
    for e in spec:
        out.extend([e.approx] * e.multiplicity)
    return sorted(out)
