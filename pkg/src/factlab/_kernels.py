"""Compiled hot loops: factorial scans and pairwise product marking.

All kernels assume p < 2**32 so that products of two reduced residues fit
in uint64. Callers validate; the pure-Python paths in field_core cover
larger moduli.
"""

import numpy as np
from numba import int64, njit, uint8, uint64

KERNEL_PRIME_LIMIT = 1 << 32


def require_kernel_range(p: int) -> None:
    if p >= KERNEL_PRIME_LIMIT:
        raise ValueError(f"compiled kernels require p < 2**32, got p={p}")


@njit(int64(uint64), nogil=True, cache=True)
def distinct_factorial_count(p):
    """Number of distinct values among 1!, 2!, ..., (p-1)! mod p."""
    seen = np.zeros(p, dtype=np.uint8)
    f = uint64(1)
    count = 0
    for n in range(uint64(1), p):
        f = (f * n) % p
        if seen[f] == 0:
            seen[f] = 1
            count += 1
    return count


@njit(uint64(uint64, uint64), nogil=True, cache=True)
def factorial_at(p, n):
    """n! mod p by direct scan; n < p."""
    f = uint64(1)
    for m in range(uint64(2), n + uint64(1)):
        f = (f * m) % p
    return f


@njit(uint64[:](uint64, uint64), nogil=True, cache=True)
def factorial_values(p, hi):
    """Array [0!, 1!, ..., hi!] mod p; hi < p."""
    out = np.empty(hi + 1, dtype=np.uint64)
    f = uint64(1)
    out[0] = f
    for n in range(uint64(1), hi + uint64(1)):
        f = (f * n) % p
        out[n] = f
    return out


@njit(uint8[:](uint64, uint64, uint64), nogil=True, cache=True)
def mark_factorial_window(p, lo, hi):
    """Indicator of {n! mod p : lo <= n <= hi}; requires 1 <= lo <= hi < p."""
    marks = np.zeros(p, dtype=np.uint8)
    f = uint64(1)
    for n in range(uint64(1), hi + uint64(1)):
        f = (f * n) % p
        if n >= lo:
            marks[f] = 1
    return marks


@njit(uint8[:](uint64, uint64[:], uint64[:]), nogil=True, cache=True)
def mark_products(p, left, right):
    """Indicator of {a*b mod p : a in left, b in right}."""
    marks = np.zeros(p, dtype=np.uint8)
    for i in range(left.size):
        a = left[i]
        for j in range(right.size):
            marks[(a * right[j]) % p] = 1
    return marks
