"""Segmented sieves for exhaustive range scans.

Range verifiers need sigma(n) for every n in a window.  Factoring each n from
scratch would be wasteful; instead a block sieve divides out every prime up to
sqrt(hi) across the whole block, leaving at most one large prime per residue.
The float arrays are prefilters only -- anything that turns into a verdict is
re-derived exactly from the factorization.
"""

from __future__ import annotations

from math import isqrt
from typing import Iterator

import numpy as np

from .factored import primes_up_to

BLOCK = 1 << 16


def block_factored_range(lo: int, hi: int) -> Iterator[tuple[int, tuple[tuple[int, int], ...]]]:
    """Yield (n, factorization) for every n in [lo, hi], ascending.

    Factorizations are canonical (prime, exponent) tuples with primes
    ascending, produced by a segmented sieve over primes <= sqrt(hi).
    """
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range [{lo}, {hi}]")
    base_primes = primes_up_to(isqrt(hi))
    for start in range(lo, hi + 1, BLOCK):
        stop = min(start + BLOCK - 1, hi)
        width = stop - start + 1
        residual = list(range(start, stop + 1))
        facs: list[list[tuple[int, int]]] = [[] for _ in range(width)]
        for p in base_primes:
            if p * p > stop:
                break
            first = ((start + p - 1) // p) * p
            for m in range(first - start, width, p):
                e = 0
                r = residual[m]
                while r % p == 0:
                    r //= p
                    e += 1
                residual[m] = r
                facs[m].append((p, e))
        for i in range(width):
            r = residual[i]
            if r > 1:
                facs[i].append((r, 1))  # no factor <= sqrt(n) left, hence prime
            yield start + i, tuple(facs[i])


def sigma_int_array(n_max: int) -> np.ndarray:
    """Exact sigma(n) for 0 <= n <= n_max as int64 (sigma fits well under 2^53).

    Divisor-add sieve; meant for n_max up to a couple of million.
    """
    if n_max > 3 * 10**6:
        raise ValueError("sigma_int_array is O(n log n) with Python overhead; use floats above 3e6")
    sig = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        sig[d:: d] += d
    return sig


def sigma_over_n_float_array(n_max: int) -> np.ndarray:
    """sigma(n)/n for 0 <= n <= n_max as float64 (relative error ~1e-14).

    Multiplicative sieve over primes <= sqrt(n_max); entries 0 and 1 are set
    to 0.0 and 1.0.  Prefilter quality only.
    """
    res = np.ones(n_max + 1, dtype=np.float64)
    rem = np.arange(n_max + 1, dtype=np.int64)
    for p in primes_up_to(isqrt(n_max)):
        c_prev = 1.0
        c_k = 1.0 + 1.0 / p
        pk = p
        inv = 1.0 / p
        while pk <= n_max:
            res[pk:: pk] *= c_k / c_prev
            rem[pk:: pk] //= p
            c_prev = c_k
            inv /= p
            c_k = c_k + inv
            pk *= p
    big = rem > 1  # leftover large prime factor, exponent necessarily 1
    res[big] *= 1.0 + 1.0 / rem[big]
    res[0] = 0.0
    if n_max >= 1:
        res[1] = 1.0
    return res


def gronwall_float_array(n_max: int, sigma_over_n: np.ndarray | None = None) -> np.ndarray:
    """G(n) = (sigma(n)/n)/log log n as float64; entries 0..2 are NaN/negative.

    Index 0 and 1 are NaN.  Index 2 is the true negative value (log log 2 < 0).
    """
    if sigma_over_n is None:
        sigma_over_n = sigma_over_n_float_array(n_max)
    n = np.arange(n_max + 1, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        ll = np.log(np.log(n))
        g = sigma_over_n / ll
    g[0:2] = np.nan
    return g
