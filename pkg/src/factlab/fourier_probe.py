"""Discrete Fourier transform of progression indicators and the fully
explicit two-spectrum error bound for interval zero counts.

Magnitudes come from the closed-form geometric sum, O(p) per spectrum; the
naive O(p*N) transform survives as a test oracle. Double precision with
compensated summation throughout; documented tolerances are 1e-6 pointwise
and 1e-4 on aggregates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field_core import FieldCtx
from .point_counts import (
    CountReport,
    ProgressionSpec,
    count_full,
    count_interval,
)
from .poly_lab import PolySpec, linear_divisors, phi_pair

POINTWISE_TOL = 1e-6

# Explicit constant for sum_r |I^(r)| <= C * p * ln(p), frozen after an
# exhaustive length sweep at p = 101 and sampled sweeps at 1009 and 10007.
L1_LOG_CONSTANT = 4.0


@dataclass(frozen=True)
class SpectrumReport:
    magnitudes: np.ndarray  # |I^(r)| for r = 0..p-1
    l1: float


def spectrum(ctx: FieldCtx, I: ProgressionSpec) -> SpectrumReport:
    """Magnitudes of the indicator transform of I via the geometric sum
    |I^(r)| = |sin(pi N u / p) / sin(pi u / p)| with u = r*step mod p."""
    I.validate(ctx)
    p, N = ctx.p, I.length
    u = (np.arange(p, dtype=np.int64) * I.step) % p
    num = np.abs(np.sin(np.pi * ((N * u) % (2 * p)) / p))
    den = np.abs(np.sin(np.pi * u / p))
    mags = np.divide(num, den, out=np.full(p, float(N)), where=u != 0)
    mags[0] = float(N)
    return SpectrumReport(magnitudes=mags, l1=math.fsum(mags))


def spectrum_complex(ctx: FieldCtx, I: ProgressionSpec) -> np.ndarray:
    """Full complex transform I^(r) = sum_{x in I} exp(-2 pi i r x / p)."""
    I.validate(ctx)
    p, N = ctx.p, I.length
    r = np.arange(p, dtype=np.int64)
    u = (r * I.step) % p
    num = 1 - np.exp(-2j * np.pi * ((u * N) % p) / p)
    den = 1 - np.exp(-2j * np.pi * u / p)
    ratio = np.divide(num, den, out=np.full(p, complex(N)), where=u != 0)
    lead = np.exp(-2j * np.pi * ((r * I.start) % p) / p)
    return lead * ratio


def naive_spectrum(ctx: FieldCtx, I: ProgressionSpec) -> np.ndarray:
    """O(p*N) direct transform; oracle for the closed form."""
    xs = I.values(ctx)
    r = np.arange(ctx.p, dtype=np.int64)[:, None]
    return np.exp(-2j * np.pi * ((r * xs[None, :]) % ctx.p) / ctx.p).sum(axis=1)


def inversion_check(ctx: FieldCtx, I: ProgressionSpec, x: int) -> bool:
    """Reconstruct the indicator at x from the full complex spectrum and
    compare with membership within 1e-6."""
    ctx.check(x)
    transform = spectrum_complex(ctx, I)
    r = np.arange(ctx.p, dtype=np.int64)
    phases = np.exp(2j * np.pi * ((r * x) % ctx.p) / ctx.p)
    terms = transform * phases
    recon = complex(math.fsum(terms.real), math.fsum(terms.imag)) / ctx.p
    expected = 1.0 if I.contains(ctx, x) else 0.0
    return abs(recon - expected) <= POINTWISE_TOL


def l1_log_bound(ctx: FieldCtx) -> float:
    """Frozen explicit-constant form of the l1 spectrum bound."""
    return L1_LOG_CONSTANT * ctx.p * math.log(ctx.p)


def fourier_error_bound(
    ctx: FieldCtx, P: PolySpec, Q: PolySpec, I: ProgressionSpec
) -> CountReport:
    """Fully explicit chain |J_I - (|I|^2/p^2) J| <= (S1^2/p^2) * 2 d^2 sqrt(p).

    Every quantity is computed: J_I and J exactly, S1 from the closed-form
    spectrum, and the Chalk-Smith constant 2 d^2 sqrt(p) for the worst
    nonzero frequency pair. Requires phi(P, Q) to have no linear divisors.
    """
    f = phi_pair(P, Q)
    divisors = linear_divisors(f)
    if divisors:
        raise ValueError(f"phi(P, Q) has linear divisors {divisors}")
    p = ctx.p
    observed = count_interval(ctx, P, Q, I)
    full = count_full(ctx, P, Q)
    reference = (I.length ** 2 / p ** 2) * full
    s1 = spectrum(ctx, I).l1
    d = f.total_degree
    bound = (s1 ** 2 / p ** 2) * 2 * d * d * math.sqrt(p)
    return CountReport(
        observed=float(observed),
        reference=reference,
        bound=bound,
        satisfied=abs(observed - reference) <= bound,
    )
