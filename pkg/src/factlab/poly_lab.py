"""Polynomials of the shifted-factorial family and their algebraic checks.

Builds the falling products P_j(x) = (x+1)...(x+j), Dickson polynomials,
the bivariate difference quotients, and the Q_kj family obtained by
dividing out linear factors. Also the algebraic preconditions consumed by
the point-counting audits: the Schmidt psi fraction, the Dickson mismatch
certificate, and indecomposability by prime degree.

All arithmetic is exact (Python integers reduced mod p); nothing here is
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .field_core import FieldCtx, Residue, is_prime_u64

MAX_DEGREE = 64


class ExactDivisionError(ArithmeticError):
    """A division that must be exact left a nonzero remainder."""


class PolySpec:
    """Univariate polynomial over F_p; coefficients ascending by degree.

    Trailing zeros are stripped, so the leading coefficient is nonzero
    unless the polynomial is zero (empty coefficient tuple, degree -1).
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        reduced = [int(c) % p for c in coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        self.p = p
        self.coeffs: Tuple[int, ...] = tuple(reduced)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def evaluate(self, x: int) -> Residue:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def derivative(self) -> "PolySpec":
        return PolySpec(self.p, [k * c for k, c in enumerate(self.coeffs)][1:])

    def scale(self, s: int) -> "PolySpec":
        return PolySpec(self.p, [c * s for c in self.coeffs])

    def shift(self, b: int) -> "PolySpec":
        """The composition P(x + b)."""
        res = PolySpec(self.p, [])
        xb = PolySpec(self.p, [b, 1])
        for c in reversed(self.coeffs):
            res = res * xb + PolySpec(self.p, [c])
        return res

    def _match(self, other: "PolySpec") -> None:
        if not isinstance(other, PolySpec) or other.p != self.p:
            raise ValueError("operands must be polynomials over the same field")

    def __add__(self, other: "PolySpec") -> "PolySpec":
        self._match(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolySpec(self.p, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other: "PolySpec") -> "PolySpec":
        self._match(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolySpec(self.p, [self.coeff(k) - other.coeff(k) for k in range(n)])

    def __mul__(self, other: "PolySpec") -> "PolySpec":
        self._match(other)
        if self.is_zero() or other.is_zero():
            return PolySpec(self.p, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolySpec(self.p, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolySpec)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"PolySpec(p={self.p}, coeffs={self.coeffs})"


class BivarPoly:
    """Dense bivariate polynomial over F_p; grid[i][j] multiplies x^i y^j."""

    __slots__ = ("p", "grid")

    def __init__(self, p: int, grid: Sequence[Sequence[int]]):
        rows = [[int(c) % p for c in row] for row in grid]
        width = max((len(r) for r in rows), default=0)
        for r in rows:
            r.extend([0] * (width - len(r)))
        while rows and not any(rows[-1]):
            rows.pop()
        while rows and all(r[-1] == 0 for r in rows):
            for r in rows:
                r.pop()
        self.p = p
        self.grid: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in rows)

    @property
    def deg_x(self) -> int:
        return len(self.grid) - 1

    @property
    def deg_y(self) -> int:
        return len(self.grid[0]) - 1 if self.grid else -1

    @property
    def total_degree(self) -> int:
        best = -1
        for i, row in enumerate(self.grid):
            for j, c in enumerate(row):
                if c and i + j > best:
                    best = i + j
        return best

    def is_zero(self) -> bool:
        return not self.grid

    def is_constant(self) -> bool:
        return self.total_degree <= 0

    def coeff(self, i: int, j: int) -> int:
        if 0 <= i < len(self.grid) and 0 <= j < len(self.grid[i]):
            return self.grid[i][j]
        return 0

    def evaluate(self, x: int, y: int) -> Residue:
        acc = 0
        for row in reversed(self.grid):
            rv = 0
            for c in reversed(row):
                rv = (rv * y + c) % self.p
            acc = (acc * x + rv) % self.p
        return acc

    def coeffs_in_x(self) -> List[PolySpec]:
        """Row i as the polynomial in y multiplying x^i."""
        return [PolySpec(self.p, row) for row in self.grid]

    def coeffs_in_y(self) -> List[PolySpec]:
        """Column j as the polynomial in x multiplying y^j."""
        cols = self.deg_y + 1
        return [PolySpec(self.p, [row[j] for row in self.grid]) for j in range(cols)]

    def transpose(self) -> "BivarPoly":
        if not self.grid:
            return self
        cols = len(self.grid[0])
        return BivarPoly(self.p, [[row[j] for row in self.grid] for j in range(cols)])

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        if other.p != self.p:
            raise ValueError("operands must share a field")
        nr = max(len(self.grid), len(other.grid))
        nc = max(self.deg_y, other.deg_y) + 1
        return BivarPoly(
            self.p,
            [[self.coeff(i, j) - other.coeff(i, j) for j in range(nc)] for i in range(nr)],
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BivarPoly)
            and self.p == other.p
            and self.grid == other.grid
        )

    def __hash__(self) -> int:
        return hash((self.p, self.grid))

    def __repr__(self) -> str:
        return f"BivarPoly(p={self.p}, deg_x={self.deg_x}, deg_y={self.deg_y})"


def from_x_poly(P: PolySpec) -> BivarPoly:
    return BivarPoly(P.p, [[c] for c in P.coeffs])


def from_y_poly(P: PolySpec) -> BivarPoly:
    return BivarPoly(P.p, [list(P.coeffs)])


def falling_product_poly(ctx: FieldCtx, j: int) -> PolySpec:
    """The monic degree-j expansion of (x+1)(x+2)...(x+j)."""
    if not 1 <= j < ctx.p:
        raise ValueError(f"need 1 <= j < p, got j={j}, p={ctx.p}")
    if j > MAX_DEGREE:
        raise ValueError(f"degree capped at {MAX_DEGREE}, got j={j}")
    out = PolySpec(ctx.p, [1])
    for i in range(1, j + 1):
        out = out * PolySpec(ctx.p, [i, 1])
    return out


def dickson_poly(ctx: FieldCtx, d: int, a: Residue) -> PolySpec:
    """Dickson polynomial D_{d,a}, satisfying D(x + a/x) = x^d + (a/x)^d.

    Coefficients d/(d-i) * C(d-i, i) * (-a)^i are computed as exact
    integers before reduction, so no modular division is involved.
    """
    if not 1 <= d < ctx.p:
        raise ValueError(f"need 1 <= d < p, got d={d}, p={ctx.p}")
    if d > MAX_DEGREE:
        raise ValueError(f"degree capped at {MAX_DEGREE}, got d={d}")
    ctx.check(a)
    coeffs = [0] * (d + 1)
    for i in range(d // 2 + 1):
        num = d * math.comb(d - i, i)
        if num % (d - i):
            raise AssertionError("Dickson coefficient is not an integer")
        coeffs[d - 2 * i] = (num // (d - i)) * (-a) ** i
    return PolySpec(ctx.p, coeffs)


def divide_linear(f: BivarPoly, a: int, b: int, c: int) -> Tuple[BivarPoly, PolySpec]:
    """Divide f by the linear polynomial a*x + b*y + c.

    Returns (quotient, remainder); the remainder is univariate in the
    variable not led by the divisor. Division is exact iff the remainder
    is the zero polynomial.
    """
    p = f.p
    a %= p
    b %= p
    c %= p
    if a == 0 and b == 0:
        raise ValueError("divisor must involve x or y")
    if a == 0:
        q, r = divide_linear(f.transpose(), b, a, c)
        return q.transpose(), r
    inv_a = pow(a, -1, p)
    rows = f.coeffs_in_x()
    if len(rows) < 2:
        return BivarPoly(p, []), rows[0] if rows else PolySpec(p, [])
    tail = PolySpec(p, [c, b])  # b*y + c
    quotient: List[PolySpec] = [PolySpec(p, [])] * (len(rows) - 1)
    for i in range(len(rows) - 1, 0, -1):
        qi = rows[i].scale(inv_a)
        quotient[i - 1] = qi
        rows[i - 1] = rows[i - 1] - qi * tail
        rows[i] = PolySpec(p, [])
    qgrid = BivarPoly(p, [list(q.coeffs) for q in quotient])
    return qgrid, rows[0]


def phi_pair(P: PolySpec, Q: PolySpec) -> BivarPoly:
    """P(x) - Q(y) for distinct polynomials; the exact difference quotient
    (P(x) - P(y)) / (x - y) when the two are equal."""
    if P.p != Q.p:
        raise ValueError("operands must share a field")
    if P.is_constant() or Q.is_constant():
        raise ValueError("phi requires nonconstant polynomials")
    diff = from_x_poly(P) - from_y_poly(Q)
    if P != Q:
        return diff
    q, r = divide_linear(diff, 1, P.p - 1, 0)
    if not r.is_zero():
        raise ExactDivisionError("x - y does not divide P(x) - P(y)")
    return q


def q_kj(ctx: FieldCtx, k: int, j: int) -> BivarPoly:
    """P_k(x) - P_j(y) with every linear factor divided out.

    For k = j the factor x - y always splits off; for even j the root
    symmetry P_j(x) = P_j(-x-j-1) forces the further factor x + y + j + 1
    (exact division is the arbiter of the sign). Nonzero remainders raise,
    signalling a wrong factor.
    """
    if not 1 <= k <= j:
        raise ValueError(f"need 1 <= k <= j, got k={k}, j={j}")
    if j >= ctx.p - 2:
        raise ValueError(f"need j < p - 2, got j={j}, p={ctx.p}")
    Pk = falling_product_poly(ctx, k)
    Pj = falling_product_poly(ctx, j)
    out = phi_pair(Pk, Pj)
    if k == j and j % 2 == 0:
        out, rem = divide_linear(out, 1, 1, j + 1)
        if not rem.is_zero():
            raise ExactDivisionError(
                f"x + y + {j + 1} does not divide the difference quotient of P_{j}"
            )
    return out


def _poly_gcd(A: PolySpec, B: PolySpec) -> PolySpec:
    p = A.p
    while not B.is_zero():
        lead_inv = pow(B.coeffs[-1], -1, p)
        db = B.degree
        R = A
        while not R.is_zero() and R.degree >= db:
            shiftd = R.degree - db
            factor = R.coeffs[-1] * lead_inv % p
            sub = [0] * shiftd + [c * factor for c in B.coeffs]
            R = R - PolySpec(p, sub)
        A, B = B, R
    return A


def _poly_roots(P: PolySpec) -> List[int]:
    """Roots of a nonzero polynomial in F_p by direct sweep."""
    p = P.p
    if P.is_zero():
        raise ValueError("zero polynomial has every root")
    if P.degree < 1:
        return []
    if p >= 1 << 31:
        raise ValueError(f"root sweep requires p < 2**31, got p={p}")
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(P.coeffs):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _substitute_shear(f: BivarPoly, s: int) -> BivarPoly:
    """f(z + s*y, y) as a polynomial in (z, y)."""
    p = f.p
    out: List[List[int]] = [[0] * (f.deg_x + f.deg_y + 2) for _ in range(f.deg_x + 1)]
    for i, row in enumerate(f.grid):
        # (z + s y)^i expanded by binomials
        for t in range(i + 1):
            w = math.comb(i, t) * pow(s, i - t, p) % p
            if w == 0:
                continue
            for j, cc in enumerate(row):
                if cc:
                    out[t][j + i - t] = (out[t][j + i - t] + w * cc) % p
    return BivarPoly(p, out)


def _constant_candidates(polys: Sequence[PolySpec]) -> List[int]:
    """Common roots of a family of polynomials (gcd then sweep)."""
    nonzero = [g for g in polys if not g.is_zero()]
    if not nonzero:
        return []
    g = nonzero[0]
    for h in nonzero[1:]:
        g = _poly_gcd(g, h)
    if g.degree < 1:
        return []
    return _poly_roots(g)


@lru_cache(maxsize=256)
def linear_divisors(f: BivarPoly) -> Tuple[Tuple[int, int, int], ...]:
    """All linear divisors a*x + b*y + c of f over F_p, normalized so the
    leading one of (a, b) equals 1.

    A linear divisor's direction must divide the leading homogeneous form
    of f, which limits the search to at most deg(f) + 1 directions; the
    constant is then pinned by common roots after a shear substitution,
    and every candidate is confirmed by exact division.
    """
    p = f.p
    D = f.total_degree
    if D < 1:
        return ()
    lead = PolySpec(p, [f.coeff(i, D - i) for i in range(D + 1)])
    directions: List[Tuple[int, int]] = []
    if lead.coeff(D) == 0:  # no x^D term: y divides the leading form
        directions.append((0, 1))
    for s in _poly_roots(lead):
        directions.append((1, (-s) % p))  # factor x - s*y of the leading form
    found: List[Tuple[int, int, int]] = []
    for (da, db) in directions:
        if da == 0:
            cands = _constant_candidates(f.coeffs_in_x())
        else:
            sheared = _substitute_shear(f, (-db) % p)
            cands = _constant_candidates(sheared.coeffs_in_y())
        for r in cands:
            cand = (da, db, (-r) % p)
            _, rem = divide_linear(f, *cand)
            if rem.is_zero():
                found.append(cand)
    return tuple(sorted(set(found)))


def schmidt_psi(f: BivarPoly) -> Tuple[Fraction, bool]:
    """The fraction psi(f) = max over i of deg g_i / i for
    f = g_0 y^d + g_1(x) y^{d-1} + ... + g_d(x), plus whether psi written
    over denominator d has numerator coprime to d (the absolute
    irreducibility hypothesis).
    """
    cols = f.coeffs_in_y()
    d = f.deg_y
    if d < 1:
        raise ValueError("f must have positive degree in y")
    g0 = cols[d]
    if g0.is_zero() or not g0.is_constant():
        raise ValueError("leading y-coefficient must be a nonzero constant")
    psi = Fraction(0)
    for i in range(1, d + 1):
        gi = cols[d - i]
        if gi.is_zero():
            continue
        psi = max(psi, Fraction(gi.degree, i))
    return psi, psi.denominator == d


@dataclass(frozen=True)
class MismatchCertificate:
    """Evidence that P_j is not alpha * D_{j,a}(x + b) + c for any choice.

    The top three coefficients force alpha, b, a uniquely and c is free
    only in the constant term, so a differing coefficient anywhere else
    rules out the whole family. ``mismatch_degree`` is None when no
    difference was found (which would falsify the underlying lemma).
    """

    p: int
    j: int
    alpha: int
    a: int
    b: int
    c: int
    mismatch_degree: Optional[int]
    poly_coeff: Optional[int]
    dickson_coeff: Optional[int]

    @property
    def found(self) -> bool:
        return self.mismatch_degree is not None


def dickson_mismatch(ctx: FieldCtx, j: int) -> MismatchCertificate:
    """Solve for the unique Dickson candidate forced by the leading
    coefficients of P_j and report the first coefficient where the two
    polynomials provably differ."""
    if j < 5:
        raise ValueError(f"mismatch certificate requires j >= 5, got j={j}")
    if j >= ctx.p:
        raise ValueError(f"need j < p, got j={j}, p={ctx.p}")
    p = ctx.p
    Pj = falling_product_poly(ctx, j)
    inv_j = pow(j % p, -1, p)
    alpha = 1  # both polynomials are monic
    b = Pj.coeff(j - 1) * inv_j % p  # Dickson x^{j-1} coefficient is zero
    binom2 = j * (j - 1) // 2 % p
    a = (binom2 * b * b - Pj.coeff(j - 2)) * inv_j % p
    candidate = dickson_poly(ctx, j, a).shift(b)
    c = (Pj.coeff(0) - candidate.coeff(0)) % p
    candidate = candidate + PolySpec(p, [c])
    # degrees j, j-1, j-2 and 0 agree by construction; search the remaining
    # two of the top five first, then everything else descending
    order = [j - 3, j - 4] + [k for k in range(j - 5, 0, -1)]
    mismatch = next((k for k in order if Pj.coeff(k) != candidate.coeff(k)), None)
    return MismatchCertificate(
        p=p,
        j=j,
        alpha=alpha,
        a=a,
        b=b,
        c=c,
        mismatch_degree=mismatch,
        poly_coeff=None if mismatch is None else Pj.coeff(mismatch),
        dickson_coeff=None if mismatch is None else candidate.coeff(mismatch),
    )


def indecomposable_by_degree(j: int) -> bool:
    """True iff degree j alone forces indecomposability (j prime)."""
    if j < 2:
        raise ValueError(f"need j >= 2, got {j}")
    return is_prime_u64(j)
