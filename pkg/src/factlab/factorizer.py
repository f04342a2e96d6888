"""Constructive factorial-product representations.

Three routes: the Wilson three-factorial identity (works for every nonzero
residue), the two-factorial witness for values of the falling products on
odd arguments, and the bounded reachability search that represents a
residue as a product of at most k factorials with arguments <= B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import _kernels
from .errors import BudgetError
from .field_core import FieldCtx, Residue, factorial_scan, mod_inverse
from .residue_census import DEFAULT_WORK_BUDGET, ResidueSet

MAX_FACTORS = 7


class NotRepresentableError(Exception):
    """The target is not a product of k factorials with arguments <= B."""


@dataclass(frozen=True)
class RepresentationCertificate:
    """A verified tuple with product of factorials congruent to the target."""

    target: Residue
    factors: Tuple[int, ...]
    bound: int

    def __post_init__(self) -> None:
        if not 1 <= len(self.factors) <= MAX_FACTORS:
            raise ValueError(f"need 1..{MAX_FACTORS} factors, got {len(self.factors)}")
        if any(n < 0 for n in self.factors):
            raise ValueError("factorial arguments must be nonnegative")
        if max(self.factors) > self.bound:
            raise ValueError("a factor exceeds the declared bound")


def verify_certificate(ctx: FieldCtx, cert: RepresentationCertificate) -> bool:
    """Independent re-check: recompute each factorial by streaming scan."""
    prod = 1
    for n in cert.factors:
        pairs = list(factorial_scan(ctx, n, n))
        prod = prod * pairs[0][1] % ctx.p
    return prod == cert.target


def _certify(ctx: FieldCtx, target: Residue, factors: Tuple[int, ...], bound: int):
    prod = 1
    for n in factors:
        prod = prod * ctx.factorial(n) % ctx.p
    if prod != target:
        raise ArithmeticError(
            f"construction produced {prod} instead of {target}; this would "
            "falsify Wilson's theorem or the level sets"
        )
    return RepresentationCertificate(target=target, factors=factors, bound=bound)


def three_factorial(ctx: FieldCtx, a: Residue) -> RepresentationCertificate:
    """Represent a as a product of three factorials via the inverse residue.

    With b = a^-1, either (b-1)!(p-1-b)! already equals a or it equals -a
    and appending (p-1)! = -1 fixes the sign; one of the two always
    verifies, so no parity convention is needed.
    """
    ctx.check(a)
    if a == 0:
        raise ValueError("0 is not a product of factorials mod p")
    p = ctx.p
    b = mod_inverse(ctx, a)
    t = ctx.factorial(b - 1) * ctx.factorial(p - 1 - b) % p
    if t == a:
        factors = (b - 1, p - 1 - b, 1)
    else:
        factors = (b - 1, p - 1 - b, p - 1)
    return _certify(ctx, a, factors, bound=max(factors))


def wilson_quotient_embed(ctx: FieldCtx, y: int, j: int) -> Tuple[int, int]:
    """(y+j, p-1-y): a two-factorial representation of the falling product
    value P_j(y), valid for odd y since then (p-1-y)! = (y!)^-1."""
    p = ctx.p
    if y % 2 == 0:
        raise ValueError(f"y={y} must be odd for the inverse-factorial identity")
    if j < 0:
        raise ValueError(f"need j >= 0, got {j}")
    if not 1 <= y or not y + j < p:
        raise ValueError(f"need 1 <= y and y + j < p, got y={y}, j={j}")
    n1, n2 = y + j, p - 1 - y
    target = 1
    for i in range(1, j + 1):
        target = target * (y + i) % p
    prod = ctx.factorial(n1) * ctx.factorial(n2) % p
    if prod != target:
        raise ArithmeticError(
            f"witness product {prod} != P_{j}({y}) = {target}; unreachable for odd y"
        )
    return n1, n2


def bounded_product_reach(
    ctx: FieldCtx, B: int, k: int, work_budget: int = DEFAULT_WORK_BUDGET
) -> List[ResidueSet]:
    """Level sets S_1..S_k where S_m holds every residue representable as a
    product of at most m factorials with arguments <= B.

    S_1 = {n! : 0 <= n <= B} and S_{m+1} = S_m * S_1; since 0! = 1 is in
    S_1, the chain is increasing and "at most m" comes for free.
    """
    p = ctx.p
    if not 0 <= B < p:
        raise ValueError(f"need 0 <= B < p, got B={B}")
    if not 1 <= k <= MAX_FACTORS:
        raise ValueError(f"need 1 <= k <= {MAX_FACTORS}, got k={k}")
    _kernels.require_kernel_range(p)
    if (B + 1) * p * k > work_budget:
        raise BudgetError(
            f"{(B + 1) * p * k} bit updates exceed the work budget {work_budget}"
        )
    multipliers = np.unique(_kernels.factorial_values(p, B))
    levels = [ResidueSet.from_indices(p, multipliers.astype(np.int64))]
    for _ in range(1, k):
        marks = _kernels.mark_products(
            p, levels[-1].indices().astype(np.uint64), multipliers
        )
        levels.append(ResidueSet(p, marks.view(bool)))
    return levels


def find_representation(
    ctx: FieldCtx,
    a: Residue,
    k: int,
    B: int,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> RepresentationCertificate:
    """Represent a as a product of exactly k factorials with arguments <= B
    (padding with 0! = 1), backtracking through the reachability levels and
    always taking the smallest usable argument."""
    ctx.check(a)
    if a == 0:
        raise ValueError("0 is not a product of factorials mod p")
    p = ctx.p
    levels = bounded_product_reach(ctx, B, k, work_budget)
    if a not in levels[k - 1]:
        raise NotRepresentableError(
            f"{a} is not a product of {k} factorials with arguments <= {B} mod {p}"
        )
    facts = [int(v) for v in _kernels.factorial_values(p, B)]
    inv_facts = [pow(f, p - 2, p) for f in facts]
    factors: List[int] = []
    cur = a
    for m in range(k - 1, 0, -1):
        prev = levels[m - 1]
        for n in range(B + 1):
            nxt = cur * inv_facts[n] % p
            if nxt in prev:
                factors.append(n)
                cur = nxt
                break
        else:
            raise AssertionError("level sets are inconsistent")
    factors.append(facts.index(cur))
    return _certify(ctx, a, tuple(factors), bound=B)


def reach_bound(p: int, epsilon: float = 6 / 7 + 0.05) -> int:
    """ceil(p^epsilon): the argument bound used by the coverage experiments."""
    return math.ceil(p ** epsilon)
