"""Reduction of alpha * P(p) modulo 1 beyond double precision.

alpha is rounded to a multiple of 2**-128, split as A_hi * 2**-64 + A_lo * 2**-128,
and P(p) is carried modulo 2**128 as two uint64 words. The integer part of the
product then drops out of wrapping uint64 arithmetic, leaving a fractional part
accurate to about 1e-16 independent of the size of P(p).
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

_TWO64 = 1 << 64
_TWO128 = 1 << 128


def alpha_words(alpha) -> tuple[int, int]:
    """(A_hi, A_lo) with alpha = (A_hi * 2**64 + A_lo) / 2**128 mod 1, rounded."""
    a = Fraction(alpha)
    A = round(a * _TWO128) % _TWO128
    return A >> 64, A & (_TWO64 - 1)


def value_words(P, xs) -> tuple[np.ndarray, np.ndarray]:
    """P(x) mod 2**128 for each integer x, as (low, high) uint64 arrays."""
    vals = [P(int(x)) % _TWO128 for x in np.asarray(xs).tolist()]
    lo = np.fromiter((v & (_TWO64 - 1) for v in vals), dtype=np.uint64, count=len(vals))
    hi = np.fromiter((v >> 64 for v in vals), dtype=np.uint64, count=len(vals))
    return lo, hi


def reduced_phase(alpha, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Fractional part of alpha * P in [0, 1) given the words of P mod 2**128."""
    A_hi, A_lo = alpha_words(alpha)
    with np.errstate(over="ignore"):
        top = np.uint64(A_hi) * lo + np.uint64(A_lo) * hi  # wraps mod 2**64
    frac = (top >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    frac += float(A_lo) * lo.astype(np.float64) * 2.0 ** -128
    frac -= np.floor(frac)
    return frac
