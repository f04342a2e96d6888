"""Factorial residue sets, product/quotient cardinalities, the strict
cardinality scan, density statistics, and the two-sided window embedding
check.

The scan over a prime range is the throughput-critical path: each prime
gets a compiled kernel pass and primes shard freely across threads (the
kernels release the GIL).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import BudgetError
from .field_core import FieldCtx
from .poly_lab import falling_product_poly
from .point_counts import eval_poly_array

DEFAULT_WORK_BUDGET = 1 << 32

# Strict-cardinality scan starts here: |A(5)| = 3 = p - 2, so the strict
# inequality genuinely fails at p = 5 and the statement is for p >= 7.
SCAN_MIN_PRIME = 7

DENSITY_TARGET = 1 - 1 / math.e


class ResidueSet:
    """Dense indicator over F_p with cached cardinality; write-once."""

    __slots__ = ("p", "_bits", "_card")

    def __init__(self, p: int, bits: np.ndarray):
        if bits.shape != (p,):
            raise ValueError(f"indicator must have shape ({p},)")
        b = bits.astype(bool, copy=True)
        b.setflags(write=False)
        self.p = p
        self._bits = b
        self._card = int(np.count_nonzero(b))

    @classmethod
    def from_indices(cls, p: int, indices: Iterable[int]) -> "ResidueSet":
        bits = np.zeros(p, dtype=bool)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= p):
            raise ValueError("index out of range")
        bits[idx] = True
        return cls(p, bits)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def cardinality(self) -> int:
        return self._card

    def __contains__(self, value: int) -> bool:
        return 0 <= value < self.p and bool(self._bits[value])

    def indices(self) -> np.ndarray:
        return np.nonzero(self._bits)[0]

    def intersection_size(self, other: "ResidueSet") -> int:
        self._match(other)
        return int(np.count_nonzero(self._bits & other._bits))

    def issubset(self, other: "ResidueSet") -> bool:
        self._match(other)
        return not bool(np.any(self._bits & ~other._bits))

    @classmethod
    def union_of(cls, sets: Sequence["ResidueSet"]) -> "ResidueSet":
        if not sets:
            raise ValueError("need at least one set")
        acc = np.zeros(sets[0].p, dtype=bool)
        for s in sets:
            sets[0]._match(s)
            acc |= s._bits
        return cls(sets[0].p, acc)

    def _match(self, other: "ResidueSet") -> None:
        if not isinstance(other, ResidueSet) or other.p != self.p:
            raise ValueError("sets must live over the same prime")

    def __repr__(self) -> str:
        return f"ResidueSet(p={self.p}, cardinality={self._card})"


def default_threads() -> int:
    env = os.environ.get("FACTLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """All primes in [lo, hi] by sieve."""
    if hi < lo or hi < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    primes = np.nonzero(sieve)[0].astype(np.int64)
    return primes[primes >= lo]


def factorial_set(ctx: FieldCtx, L: int, N: int) -> ResidueSet:
    """The residue set {n! mod p : L+1 <= n <= L+N} in one streaming pass.

    L = 0, N = p-1 yields the full factorial residue set of the prime.
    """
    p = ctx.p
    if L < 0 or N < 1:
        raise ValueError(f"need L >= 0 and N >= 1, got L={L}, N={N}")
    if L + N >= p:
        raise ValueError(f"window end L+N={L + N} must stay below p={p}")
    _kernels.require_kernel_range(p)
    marks = _kernels.mark_factorial_window(p, L + 1, L + N)
    return ResidueSet(p, marks.view(bool))


def scan_cardinalities(
    p_lo: int, p_hi: int, threads: Optional[int] = None
) -> List[Tuple[int, int]]:
    """(p, |{n! mod p : 1 <= n <= p-1}|) for every prime in [p_lo, p_hi].

    Primes are sharded across worker threads; each worker owns its scan
    state, results merge in submission order (deterministic output).
    """
    _kernels.require_kernel_range(max(p_hi, 2))
    primes = primes_in_range(p_lo, p_hi)
    if primes.size == 0:
        return []
    threads = threads if threads is not None else default_threads()
    if threads <= 1 or primes.size == 1:
        return [(int(p), int(_kernels.distinct_factorial_count(p))) for p in primes]

    def work(chunk: np.ndarray) -> List[Tuple[int, int]]:
        return [(int(p), int(_kernels.distinct_factorial_count(p))) for p in chunk]

    chunks = np.array_split(primes, min(len(primes), threads * 8))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(work, chunks)
    return [pair for part in parts for pair in part]


def erdos_scan(
    p_lo: int, p_hi: int, threads: Optional[int] = None
) -> List[int]:
    """Primes in [p_lo, p_hi] whose factorial residue count reaches p - 2.

    Expected empty: the strict bound |A(p)| < p - 2 has been machine-checked
    far beyond desk scale. Primes below 7 are rejected because p = 5 fails
    the strict form trivially.
    """
    if p_lo < SCAN_MIN_PRIME:
        raise ValueError(
            f"scan starts at p = {SCAN_MIN_PRIME}: |A(5)| = 3 = p - 2, so the "
            "strict inequality is a statement for p >= 7"
        )
    if p_hi < p_lo:
        raise ValueError(f"empty range [{p_lo}, {p_hi}]")
    return [p for p, card in scan_cardinalities(p_lo, p_hi, threads) if card >= p - 2]


def product_set_card(
    S: ResidueSet, T: ResidueSet, work_budget: int = DEFAULT_WORK_BUDGET
) -> int:
    """Exact |{s*t mod p}| by marking every pairwise product."""
    S._match(T)
    cost = S.cardinality * T.cardinality
    if cost > work_budget:
        raise BudgetError(
            f"{cost} products exceed the work budget {work_budget}; shrink p"
        )
    marks = _kernels.mark_products(
        S.p, S.indices().astype(np.uint64), T.indices().astype(np.uint64)
    )
    return int(marks.sum())


def quotient_set_card(
    S: ResidueSet, T: ResidueSet, work_budget: int = DEFAULT_WORK_BUDGET
) -> int:
    """Exact |{s * t^-1 mod p}|; requires 0 outside T."""
    S._match(T)
    if 0 in T:
        raise ValueError("quotient set requires 0 not in T")
    cost = S.cardinality * T.cardinality
    if cost > work_budget:
        raise BudgetError(
            f"{cost} products exceed the work budget {work_budget}; shrink p"
        )
    p = S.p
    inv = np.array([pow(int(t), p - 2, p) for t in T.indices()], dtype=np.uint64)
    marks = _kernels.mark_products(p, S.indices().astype(np.uint64), inv)
    return int(marks.sum())


def density_stats(ctx: FieldCtx) -> Tuple[float, float]:
    """(|A(p)|/p, deviation from 1 - 1/e). Report-only: the limit density
    is conjectural and nothing here asserts it."""
    _kernels.require_kernel_range(ctx.p)
    card = int(_kernels.distinct_factorial_count(ctx.p))
    ratio = card / ctx.p
    return ratio, ratio - DENSITY_TARGET


def embedding_check(ctx: FieldCtx, N: int, M: int) -> bool:
    """Verify the two-factorial witness embedding for the window family.

    A is {1!..(2N)!} union {(p-2N)!..(p-1)!}; for each j <= M and each odd
    y <= 2N - M the member P_j(y) must equal (y+j)! * (p-1-y)! with both
    witness factorials inside A. Returns True iff every membership holds.
    """
    p = ctx.p
    if N < 1 or M < 0:
        raise ValueError(f"need N >= 1 and M >= 0, got N={N}, M={M}")
    if 2 * N + M >= p:
        raise ValueError(f"need 2N + M < p, got 2N+M={2 * N + M}, p={p}")
    if M == 0:
        return True
    facts = ctx.factorial_table()
    in_A = np.zeros(p, dtype=bool)
    in_A[facts[1 : 2 * N + 1].astype(np.int64)] = True
    in_A[facts[p - 2 * N : p].astype(np.int64)] = True
    for j in range(1, M + 1):
        poly = falling_product_poly(ctx, j)
        ys = np.arange(1, 2 * N - M + 1, 2, dtype=np.int64)
        targets = eval_poly_array(poly, ys)
        for y, target in zip(ys.tolist(), targets.tolist()):
            u = int(facts[y + j])
            v = int(facts[p - 1 - y])
            if u * v % p != target or not in_A[u] or not in_A[v]:
                return False
    return True


def image_set(ctx: FieldCtx, poly, I) -> ResidueSet:
    """The image of a progression under a polynomial, as a residue set."""
    return ResidueSet.from_indices(ctx.p, eval_poly_array(poly, I.values(ctx)))
