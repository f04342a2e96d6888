"""Union lower bound for overlapping set families, the binomial link
between a product set and its generator, and the parameter calculators
behind the two product-set theorems.

Logarithms are natural throughout; the regime constants default to 1 and
are configurable, since the source only promises their existence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .residue_census import ResidueSet


@dataclass(frozen=True)
class UnionFamilyStats:
    """a = minimum member size, b = maximum pairwise intersection, n = family size."""

    a: int
    b: int
    n: int

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError(f"need b >= 1, got b={self.b}")
        if self.a < self.b:
            raise ValueError(f"need a >= b, got a={self.a}, b={self.b}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got n={self.n}")


def union_lower_bound(stats: UnionFamilyStats) -> float:
    """(a^2/b) * (1 - a/(n*b)); may be negative (vacuous), returned as-is."""
    a, b, n = stats.a, stats.b, stats.n
    return (a * a / b) * (1 - a / (n * b))


@dataclass(frozen=True)
class FamilyReport:
    n: int
    a: int
    b: int
    applicable: bool
    bound: Optional[float]
    union_size: int
    holds: Optional[bool]


def verify_family(sets: Sequence[ResidueSet]) -> FamilyReport:
    """Measure a family of residue sets against the union lower bound.

    a is the smallest member size and b the largest pairwise intersection;
    if a < b or b = 0 the bound's hypothesis fails and the report marks it
    inapplicable instead of raising.
    """
    if len(sets) < 2:
        raise ValueError("need at least two sets")
    if any(s.cardinality == 0 for s in sets):
        raise ValueError("sets must be nonempty")
    a = min(s.cardinality for s in sets)
    b = 0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            b = max(b, sets[i].intersection_size(sets[j]))
    union_size = ResidueSet.union_of(sets).cardinality
    if b < 1 or a < b:
        return FamilyReport(
            n=len(sets), a=a, b=b, applicable=False, bound=None,
            union_size=union_size, holds=None,
        )
    bound = union_lower_bound(UnionFamilyStats(a=a, b=b, n=len(sets)))
    return FamilyReport(
        n=len(sets), a=a, b=b, applicable=True, bound=bound,
        union_size=union_size, holds=union_size >= bound,
    )


def binomial_link(product_card: int) -> int:
    """Smallest m with m(m+1)/2 >= product_card: a certified lower bound on
    |A| given |A*A|, since distinct unordered pairs cover the product set."""
    if product_card < 1:
        raise ValueError(f"need product_card >= 1, got {product_card}")
    m = (math.isqrt(8 * product_card + 1) - 1) // 2
    if m * (m + 1) // 2 < product_card:
        m += 1
    return max(m, 1)


@dataclass(frozen=True)
class TheoremParams:
    """Optimal exponent choices for the product-set lower bound.

    kappa = ln ln p / ln p; the three constraint inequalities hold (with
    equality) for every p, but delta is positive only for astronomically
    large p under natural logs, so positivity is reported rather than
    raised: every desk-scale modulus sits below the threshold.
    """

    p: int
    kappa: float
    eps1: float
    eps2: float
    delta: float
    N: int
    M: int
    delta_positive: bool
    constraints_ok: bool


def theorem1_params(p: int) -> TheoremParams:
    """kappa, eps1 = 1/14 - 4 kappa/7, eps2 = 1/7 - kappa/7, delta = eps1,
    plus the induced N = floor(p^(1-eps1)) and M = floor(p^(eps2))."""
    if p < 17:
        raise ValueError(f"need p >= 17, got {p}")
    kappa = math.log(math.log(p)) / math.log(p)
    eps1 = 1 / 14 - 4 * kappa / 7
    eps2 = 1 / 7 - kappa / 7
    delta = 1 / 14 - 4 * kappa / 7
    tol = 1e-12
    constraints_ok = (
        delta <= eps1 + tol
        and delta <= 1 / 2 - 2 * eps1 - 2 * eps2 - 2 * kappa + tol
        and delta <= eps2 - eps1 - kappa + tol
    )
    return TheoremParams(
        p=p,
        kappa=kappa,
        eps1=eps1,
        eps2=eps2,
        delta=delta,
        N=int(p ** (1 - eps1)),
        M=int(p ** eps2),
        delta_positive=delta > 0,
        constraints_ok=constraints_ok,
    )


DEFAULT_CONSTANTS = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)  # c, c1, c2, c3, c4, c5


@dataclass(frozen=True)
class RegimeBound:
    regime: int
    main_term: float
    error_scale: Optional[float]
    recommended: Optional[float]
    recommended_name: Optional[str]
    K: Fraction
    Q: float


def theorem2_bound(
    p: int, N: int, constants: Optional[Sequence[float]] = None
) -> RegimeBound:
    """Classify N into the five product-set regimes and evaluate the
    corresponding bound, with the recommended R or M for regimes 3-5.

    The top threshold is clamped at p so N = p always lands in regime 1;
    below c5 * sqrt(p) (ln p)^2 the hypothesis fails and a range error is
    raised.
    """
    c, c1, c2, c3, c4, c5 = constants if constants is not None else DEFAULT_CONSTANTS
    if p < 3:
        raise ValueError(f"need p >= 3, got {p}")
    lg = math.log(p)
    sq = math.sqrt(p)
    floor_n = c5 * sq * lg ** 2
    if not floor_n <= N <= p:
        raise ValueError(
            f"N={N} outside hypothesis range [{floor_n:.1f}, {p}]"
        )
    K = Fraction(p, N)
    Q = N / (sq * lg ** 2)
    t1 = min(c1 * p ** (13 / 14) * lg ** (4 / 7), float(p))
    t2 = c2 * p ** (7 / 8) * lg
    t3 = c3 * p ** (4 / 5) * lg ** (8 / 5)
    t4 = c4 * p ** (4 / 5) * lg ** (4 / 5)
    if N >= t1:
        return RegimeBound(1, float(p), p ** (13 / 14) * lg ** (4 / 7),
                           None, None, K, Q)
    if N >= t2:
        return RegimeBound(2, float(p), p ** (5 / 6) * float(K) ** (4 / 3) * lg ** (4 / 3),
                           None, None, K, Q)
    if N >= t3:
        # Q > 1 throughout regime 3 unless c3 is set absurdly small
        r = Q ** (1 / 3) * math.log(Q) ** (-2 / 3) if Q > 1 else 1.0
        return RegimeBound(3, c * N * r, None, r, "R", K, Q)
    m = min(math.sqrt(float(K)), Q ** (1 / 3))
    if N >= t4:
        return RegimeBound(4, c * N * math.sqrt(float(K)), None, m, "M", K, Q)
    return RegimeBound(5, c * N * Q ** (1 / 3), None, m, "M", K, Q)
