"""Exact zero counting for the bivariate difference polynomials.

Counts zeros of phi(P, Q) over the full plane and over I x I, image and
intersection cardinalities of polynomial maps on progressions, and the
closed-form audits: the Lang-Weil window and the Chalk-Smith exponential
sum bound.

The production counters are O(p * deg) value histograms; the O(p^2) grid
evaluation is kept only as an independent oracle for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field_core import FieldCtx
from .poly_lab import MAX_DEGREE, PolySpec, linear_divisors, phi_pair

_VECTOR_PRIME_LIMIT = 1 << 31  # int64 products a*b with a,b < 2**31 stay exact

EXP_SUM_REL_TOL = 1e-6


@dataclass(frozen=True)
class ProgressionSpec:
    """Arithmetic progression start, start+step, ... in F_p (step nonzero),
    so all `length` elements are distinct whenever length <= p."""

    start: int
    step: int
    length: int

    def validate(self, ctx: FieldCtx) -> None:
        p = ctx.p
        if not 0 <= self.start < p:
            raise ValueError(f"start {self.start} out of range")
        if not 0 < self.step < p:
            raise ValueError(f"step {self.step} must be a nonzero residue")
        if not 1 <= self.length <= p:
            raise ValueError(f"length {self.length} out of range [1, {p}]")

    def values(self, ctx: FieldCtx) -> np.ndarray:
        self.validate(ctx)
        _check_vector_range(ctx)
        idx = np.arange(self.length, dtype=np.int64)
        return (self.start + self.step * idx) % ctx.p

    def contains(self, ctx: FieldCtx, x: int) -> bool:
        self.validate(ctx)
        i = (x - self.start) * pow(self.step, -1, ctx.p) % ctx.p
        return i < self.length


@dataclass(frozen=True)
class CountReport:
    observed: float
    reference: float
    bound: float
    satisfied: bool


def _check_vector_range(ctx: FieldCtx) -> None:
    if ctx.p >= _VECTOR_PRIME_LIMIT:
        raise ValueError(f"vectorized counting requires p < 2**31, got p={ctx.p}")


def eval_poly_array(P: PolySpec, xs: np.ndarray) -> np.ndarray:
    """Horner evaluation of P at an int64 array of residues."""
    acc = np.zeros(len(xs), dtype=np.int64)
    for c in reversed(P.coeffs):
        acc = (acc * xs + c) % P.p
    return acc


def _check_pair(P: PolySpec, Q: PolySpec) -> None:
    if P.is_constant() or Q.is_constant():
        raise ValueError("polynomials must be nonconstant")
    if max(P.degree, Q.degree) > MAX_DEGREE:
        raise ValueError(f"degrees capped at {MAX_DEGREE}")


def count_full(ctx: FieldCtx, P: PolySpec, Q: PolySpec) -> int:
    """J(P, Q): exact number of zeros of phi(P, Q) over F_p x F_p.

    For P = Q the diagonal points count iff P'(x) = 0, matching
    phi(P, P)(x, x) = P'(x).
    """
    _check_pair(P, Q)
    _check_vector_range(ctx)
    p = ctx.p
    xs = np.arange(p, dtype=np.int64)
    if P == Q:
        counts = np.bincount(eval_poly_array(P, xs), minlength=p)
        off_diag = int((counts * counts).sum()) - p
        diag = int(np.count_nonzero(eval_poly_array(P.derivative(), xs) == 0))
        return off_diag + diag
    table = np.bincount(eval_poly_array(Q, xs), minlength=p)
    return int(table[eval_poly_array(P, xs)].sum())


def count_full_bruteforce(ctx: FieldCtx, P: PolySpec, Q: PolySpec) -> int:
    """O(p^2) oracle: evaluate the phi(P, Q) coefficient grid everywhere."""
    _check_pair(P, Q)
    _check_vector_range(ctx)
    p = ctx.p
    f = phi_pair(P, Q)
    ys = np.arange(p, dtype=np.int64)
    rows = [eval_poly_array(g, ys) for g in f.coeffs_in_x()]
    xs = np.arange(p, dtype=np.int64)[:, None]
    acc = np.zeros((p, p), dtype=np.int64)
    for row_vals in reversed(rows):
        acc = (acc * xs + row_vals[None, :]) % p
    return int(np.count_nonzero(acc == 0))


def count_interval(ctx: FieldCtx, P: PolySpec, Q: PolySpec, I: ProgressionSpec) -> int:
    """J_I(P, Q): zeros of phi(P, Q) restricted to I x I."""
    _check_pair(P, Q)
    vals = I.values(ctx)
    if P == Q:
        _, counts = np.unique(eval_poly_array(P, vals), return_counts=True)
        off_diag = int((counts * counts).sum()) - len(vals)
        diag = int(np.count_nonzero(eval_poly_array(P.derivative(), vals) == 0))
        return off_diag + diag
    table = np.bincount(eval_poly_array(Q, vals), minlength=ctx.p)
    return int(table[eval_poly_array(P, vals)].sum())


def image_count(ctx: FieldCtx, P: PolySpec, I: ProgressionSpec) -> int:
    """|P(I)| by a marking pass."""
    if P.is_constant():
        raise ValueError("polynomial must be nonconstant")
    return int(np.unique(eval_poly_array(P, I.values(ctx))).size)


def intersection_count(
    ctx: FieldCtx, P: PolySpec, Q: PolySpec, I: ProgressionSpec
) -> int:
    """|P(I) intersect Q(I)|, exact."""
    _check_pair(P, Q)
    vals = I.values(ctx)
    marks_p = np.zeros(ctx.p, dtype=bool)
    marks_q = np.zeros(ctx.p, dtype=bool)
    marks_p[eval_poly_array(P, vals)] = True
    marks_q[eval_poly_array(Q, vals)] = True
    return int(np.count_nonzero(marks_p & marks_q))


def langweil_report(ctx: FieldCtx, P: PolySpec, Q: PolySpec) -> CountReport:
    """Audit |J(P, Q) - p| <= (d-1)(d-2)sqrt(p) + d - 1 with d = deg phi.

    The caller is responsible for phi(P, Q) being absolutely irreducible
    (prime j, or distinct primes via the psi criterion); a constant phi is
    rejected as degenerate.
    """
    f = phi_pair(P, Q)
    d = f.total_degree
    if d < 1:
        raise ValueError("phi(P, Q) is constant; Lang-Weil does not apply")
    observed = count_full(ctx, P, Q)
    bound = (d - 1) * (d - 2) * math.sqrt(ctx.p) + d - 1
    return CountReport(
        observed=float(observed),
        reference=float(ctx.p),
        bound=bound,
        satisfied=abs(observed - ctx.p) <= bound,
    )


def _phases(values: np.ndarray, coef: int, p: int) -> np.ndarray:
    """exp(2 pi i coef*v / p) with the angle reduced in exact integers."""
    return np.exp(2j * np.pi * ((coef * values) % p) / p)


def _value_phase_table(vals: np.ndarray, coef: int, p: int) -> np.ndarray:
    """W[v] = sum over x with vals[x] = v of exp(2 pi i coef*x / p)."""
    ph = _phases(np.arange(p, dtype=np.int64), coef, p)
    real = np.bincount(vals, weights=ph.real, minlength=p)
    imag = np.bincount(vals, weights=ph.imag, minlength=p)
    return real + 1j * imag


def _fsum_complex(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def exp_sum_check(
    ctx: FieldCtx, P: PolySpec, Q: PolySpec, b1: int, b2: int
) -> CountReport:
    """Magnitude of the exponential sum over the zero set of phi(P, Q)
    against the Chalk-Smith bound 2 d^2 sqrt(p).

    Rejects (b1, b2) = (0, 0) and any phi divisible by b1*x + b2*y + c.
    """
    _check_pair(P, Q)
    _check_vector_range(ctx)
    p = ctx.p
    b1 %= p
    b2 %= p
    if b1 == 0 and b2 == 0:
        raise ValueError("(b1, b2) must be nonzero")
    f = phi_pair(P, Q)
    for (a, b, _c) in linear_divisors(f):
        if (a * b2 - b * b1) % p == 0:
            raise ValueError(
                f"phi(P, Q) has a linear divisor in the direction ({b1}, {b2})"
            )
    d = f.total_degree
    xs = np.arange(p, dtype=np.int64)
    if P == Q:
        vals = eval_poly_array(P, xs)
        w1 = _value_phase_table(vals, b1, p)
        w2 = _value_phase_table(vals, b2, p)
        paired = _fsum_complex(w1 * w2)
        all_diag = _fsum_complex(_phases(xs, b1 + b2, p))
        crit = xs[eval_poly_array(P.derivative(), xs) == 0]
        crit_diag = _fsum_complex(_phases(crit, b1 + b2, p))
        total = paired - all_diag + crit_diag
    else:
        w2 = _value_phase_table(eval_poly_array(Q, xs), b2, p)
        terms = _phases(xs, b1, p) * w2[eval_poly_array(P, xs)]
        total = _fsum_complex(terms)
    observed = abs(total)
    bound = 2 * d * d * math.sqrt(p)
    return CountReport(
        observed=observed,
        reference=0.0,
        bound=bound,
        satisfied=observed <= bound * (1 + EXP_SUM_REL_TOL),
    )
