"""Small integer helpers: sieving, factoring, Kronecker symbols."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from sympy import factorint as _factorint
from sympy.ntheory import sqrt_mod as _sqrt_mod


def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain odd-only sieve)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    odd = np.ones((limit + 1) // 2, dtype=bool)  # odd[i] <-> 2i+1
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2::p] = False
    out = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate(([2], out)).astype(np.int64)


def segmented_primes(lo: int, hi: int, base: np.ndarray | None = None) -> np.ndarray:
    """Primes in [lo, hi) via a segmented sieve of Eratosthenes."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    if base is None:
        base = primes_upto(math.isqrt(hi - 1) + 1)
    mark = np.ones(hi - lo, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        mark[start - lo::p] = False
    return np.flatnonzero(mark).astype(np.int64) + lo


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for 64-bit inputs
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as sorted (p, e) pairs."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    return tuple(sorted(_factorint(n).items()))


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (a, b) with n = a*b**2 and a squarefree, by trial division."""
    a, b = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            b *= p ** (e // 2)
            if e % 2:
                a *= p
        p += 1 if p == 2 else 2
    a *= m
    return a, b


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def totient(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D | p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_all(a: int, p: int) -> list[int]:
    """All square roots of a modulo the prime p, sorted."""
    return sorted(_sqrt_mod(a % p, p, all_roots=True) or [])


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)
