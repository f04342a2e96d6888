"""Prime-field arithmetic, factorial streaming, and Wilson identities.

Everything else in the package builds on :class:`FieldCtx`: an odd prime
modulus below 2**63 with exact multiply-reduce semantics. Python integers
supply the double-width intermediate for free; the throughput-critical
scans live in compiled kernels (see ``_kernels``).
"""

from __future__ import annotations

from typing import Iterator, Optional, Tuple

import numpy as np

from . import _kernels

Residue = int  # canonical representative in [0, p-1]

# Deterministic Miller-Rabin witness set, exact for all n < 3.3e24 (covers 2**64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Full factorial tables are cached only up to this modulus (8 bytes per entry).
_FACT_TABLE_LIMIT = 1 << 23


def is_prime_u64(n: int) -> bool:
    """Deterministic primality test, exact for all 0 <= n < 2**64."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldCtx:
    """Arithmetic context for an odd prime modulus p < 2**63.

    Immutable and safe to share across threads; all operations are pure.
    """

    __slots__ = ("p", "_fact_table")

    def __init__(self, p: int):
        if not isinstance(p, int):
            raise TypeError("modulus must be an integer")
        if p < 3 or p % 2 == 0 or p >= 1 << 63:
            raise ValueError(f"modulus must be an odd prime below 2**63, got {p}")
        if not is_prime_u64(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self._fact_table: Optional[np.ndarray] = None

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p})"

    def check(self, a: int) -> Residue:
        if not 0 <= a < self.p:
            raise ValueError(f"residue {a} out of range [0, {self.p - 1}]")
        return a

    def mul(self, a: Residue, b: Residue) -> Residue:
        return a * b % self.p

    def add(self, a: Residue, b: Residue) -> Residue:
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a: Residue, b: Residue) -> Residue:
        d = a - b
        return d + self.p if d < 0 else d

    def neg(self, a: Residue) -> Residue:
        return 0 if a == 0 else self.p - a

    def pow(self, a: Residue, e: int) -> Residue:
        return pow(a, e, self.p)

    def factorial(self, n: int) -> Residue:
        """n! mod p for 0 <= n < p."""
        if not 0 <= n < self.p:
            raise ValueError(f"factorial argument {n} out of range [0, {self.p - 1}]")
        table = self._table()
        if table is not None:
            return int(table[n])
        if self.p < _kernels.KERNEL_PRIME_LIMIT:
            return int(_kernels.factorial_at(self.p, n))
        f = 1
        for m in range(2, n + 1):
            f = f * m % self.p
        return f

    def _table(self) -> Optional[np.ndarray]:
        if self.p > _FACT_TABLE_LIMIT:
            return None
        if self._fact_table is None:
            table = _kernels.factorial_values(self.p, self.p - 1)
            table.setflags(write=False)
            self._fact_table = table
        return self._fact_table

    def factorial_table(self) -> np.ndarray:
        """Read-only array t with t[n] = n! mod p; only for p <= 2**23."""
        table = self._table()
        if table is None:
            raise ValueError(f"factorial table supported only for p <= {_FACT_TABLE_LIMIT}")
        return table


def factorial_scan(
    ctx: FieldCtx,
    lo: int,
    hi: int,
    checkpoint: Optional[Tuple[int, Residue]] = None,
) -> Iterator[Tuple[int, Residue]]:
    """Yield (n, n! mod p) for n = lo..hi, computed incrementally from 0! = 1.

    A checkpoint (n0, n0! mod p) with n0 <= lo lets sharded scans resume
    without replaying the prefix.
    """
    p = ctx.p
    if not 0 <= lo <= hi:
        raise ValueError(f"need 0 <= lo <= hi, got lo={lo} hi={hi}")
    if hi >= p:
        raise ValueError(f"hi={hi} out of range: factorials vanish mod p for n >= p")
    if checkpoint is None:
        n0, f = 0, 1
    else:
        n0, f = checkpoint
        if not 0 <= n0 <= lo:
            raise ValueError(f"checkpoint n={n0} is past the scan start {lo}")
        ctx.check(f)
    for n in range(n0 + 1, lo + 1):
        f = f * n % p
    yield (lo, f)
    for n in range(lo + 1, hi + 1):
        f = f * n % p
        yield (n, f)


def save_checkpoint(path: str, ctx: FieldCtx, n: int, value: Residue) -> None:
    """Persist a factorial-scan shard checkpoint as a plain `p,n,value` line."""
    ctx.check(value)
    with open(path, "w") as fh:
        fh.write(f"{ctx.p},{n},{value}\n")


def load_checkpoint(path: str, ctx: FieldCtx) -> Tuple[int, Residue]:
    """Read a `p,n,value` checkpoint, verifying it belongs to this modulus."""
    with open(path) as fh:
        p_str, n_str, v_str = fh.readline().strip().split(",")
    if int(p_str) != ctx.p:
        raise ValueError(f"checkpoint is for p={p_str}, context has p={ctx.p}")
    n, value = int(n_str), int(v_str)
    ctx.check(value)
    return n, value


def mod_inverse(ctx: FieldCtx, a: Residue) -> Residue:
    """Multiplicative inverse of a nonzero residue."""
    ctx.check(a)
    if a == 0:
        raise ValueError("0 has no inverse")
    return pow(a, -1, ctx.p)


def wilson_pair(ctx: FieldCtx, y: int) -> Residue:
    """y! * (p-1-y)! mod p.

    By Wilson's theorem this equals p-1 for even y and 1 for odd y; the
    value returned is the actual product, the identity is tested elsewhere.
    """
    if not 0 <= y <= ctx.p - 1:
        raise ValueError(f"y={y} out of range [0, {ctx.p - 1}]")
    return ctx.mul(ctx.factorial(y), ctx.factorial(ctx.p - 1 - y))
