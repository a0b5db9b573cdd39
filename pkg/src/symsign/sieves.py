"""Smallest-prime-factor machinery shared by the multiplicative sieves.

Every multiplicative table in this package (two-squares counts, divisor
counts, symmetric-power coefficients) is assembled the same way: factor
each m <= N as q * t with q = spf(m)^nu the exact power of the smallest
prime factor and t coprime to q, evaluate the function on prime powers,
and propagate along cofactors.  The propagation is done with a fixed
number of vectorized gather rounds, so the result is bitwise independent
of how the work would be partitioned.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_MEMORY_CAP = 4 << 30  # bytes; desk-scale default, override per call

# Transient working set per integer during a table build: spf (4 bytes),
# prime power + cofactor (8+8), values and seed array (8+8), slack for
# intermediates.
_BYTES_PER_ENTRY = 56


class ResourceCapError(MemoryError):
    """Estimated table memory exceeds the configured cap."""


def check_memory_cap(n: int, mem_cap: int | None = None) -> None:
    """Raise ResourceCapError before any allocation if a build to n is too big."""
    cap = DEFAULT_MEMORY_CAP if mem_cap is None else mem_cap
    need = estimate_build_bytes(n)
    if need > cap:
        raise ResourceCapError(
            f"sieve to N={n} needs ~{need} bytes, cap is {cap}"
        )


def estimate_build_bytes(n: int) -> int:
    return (n + 1) * _BYTES_PER_ENTRY


@dataclass(frozen=True)
class FactorTable:
    """Smallest-prime-factor decomposition of every integer up to trunc.

    For m >= 2: m = prime_power[m] * cofactor[m], where prime_power[m] is
    the exact power of spf[m] dividing m and cofactor[m] is coprime to it.
    pp_values/pp_prime/pp_exp enumerate all prime powers q = p^nu <= trunc.
    """

    trunc: int
    spf: np.ndarray          # uint32, spf[0]=0, spf[1]=1
    prime_power: np.ndarray  # int64
    cofactor: np.ndarray     # int64
    primes: np.ndarray       # int64, ascending
    pp_values: np.ndarray    # int64, all q = p^nu <= trunc
    pp_prime: np.ndarray     # int64
    pp_exp: np.ndarray       # int64


def _spf_sieve(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    m = np.arange(n + 1, dtype=np.uint32)
    unmarked = spf == 0
    spf[unmarked] = m[unmarked]  # primes, plus 0 and 1 mapping to themselves
    spf[1] = 1
    return spf


@functools.lru_cache(maxsize=2)
def factor_table(n: int, mem_cap: int | None = None) -> FactorTable:
    """Build (and memoize) the factorization scaffolding for [0, n]."""
    if n < 1:
        raise ValueError(f"factor_table needs n >= 1, got {n}")
    check_memory_cap(n, mem_cap)

    spf = _spf_sieve(n)
    m = np.arange(n + 1, dtype=np.int64)
    p = spf.astype(np.int64)
    primes = np.nonzero((p == m) & (m >= 2))[0].astype(np.int64)

    # Peel off the smallest prime: q starts at p and absorbs factors of p
    # from t = m/p until t is coprime to p.
    q = p.copy()
    t = np.ones(n + 1, dtype=np.int64)
    t[2:] = m[2:] // p[2:]
    active = np.nonzero(t[2:] % p[2:] == 0)[0] + 2
    while active.size:
        q[active] *= p[active]
        t[active] //= p[active]
        active = active[t[active] % p[active] == 0]
    q[0] = 0
    q[1] = 1
    cof = np.ones(n + 1, dtype=np.int64)
    cof[2:] = m[2:] // q[2:]
    cof[0] = 0

    # Enumerate prime powers p^nu <= n, grouped by ascending nu.
    vals = [primes]
    prs = [primes]
    exps = [np.ones(primes.size, dtype=np.int64)]
    cur = primes.copy()
    base = primes.copy()
    e = 1
    while True:
        keep = cur <= n // base  # cur * base <= n without overflow
        if not keep.any():
            break
        cur = cur[keep] * base[keep]
        base = base[keep]
        e += 1
        vals.append(cur)
        prs.append(base)
        exps.append(np.full(base.size, e, dtype=np.int64))
    pp_values = np.concatenate(vals)
    pp_prime = np.concatenate(prs)
    pp_exp = np.concatenate(exps)

    for arr in (spf, q, cof, primes, pp_values, pp_prime, pp_exp):
        arr.flags.writeable = False
    return FactorTable(
        trunc=n,
        spf=spf,
        prime_power=q,
        cofactor=cof,
        primes=primes,
        pp_values=pp_values,
        pp_prime=pp_prime,
        pp_exp=pp_exp,
    )


def primes_up_to(n: int) -> np.ndarray:
    return factor_table(n).primes


def _max_distinct_primes(n: int) -> int:
    """Largest number of distinct prime factors of any m <= n."""
    count, prod = 0, 1
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
        prod *= p
        if prod > n:
            return max(count, 1)
        count += 1
    raise ValueError(f"n={n} beyond supported primorial range")


def multiplicative_table(
    ft: FactorTable, prime_power_values: np.ndarray
) -> np.ndarray:
    """Table of a multiplicative function from its values on prime powers.

    prime_power_values is indexed by the prime power itself (an array over
    [0, trunc], read only at prime-power indices).  Output: out[1] = 1,
    out[m] = f(q) * f(cofactor) propagated along smallest-prime-factor
    peeling; out[0] = 0.

    The fill runs ascending-prime right-nested products through a fixed
    number of full-array gather rounds, so every entry's value is the same
    IEEE expression regardless of evaluation schedule.
    """
    n = ft.trunc
    if prime_power_values.shape[0] != n + 1:
        raise ValueError("prime_power_values must cover [0, trunc]")
    q, cof = ft.prime_power, ft.cofactor
    out = prime_power_values[q]
    one = prime_power_values.dtype.type(1)
    out[0] = 0
    out[1] = one
    # Round t makes every m with at most t+1 distinct primes correct;
    # entries already correct recompute to the identical value.
    for _ in range(_max_distinct_primes(n) - 1):
        out = prime_power_values[q] * out[cof]
        out[0] = 0
        out[1] = one
    return out


def divisor_count_table(n: int, order: int = 2, mem_cap: int | None = None) -> np.ndarray:
    """d_order(m) for m <= n: Dirichlet convolution of `order` copies of 1.

    order=2 is the usual divisor count; d_r(p^nu) = C(nu+r-1, r-1).
    Returned as float64 (values are far below 2^53, so exact).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    ft = factor_table(n, mem_cap)
    seed = np.zeros(n + 1)
    seed[ft.pp_values] = [
        float(math.comb(int(e) + order - 1, order - 1)) for e in ft.pp_exp
    ]
    return multiplicative_table(ft, seed)
