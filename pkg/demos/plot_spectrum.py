"""
The Fourier side of the prime averages
======================================

khat is the normalized Fourier transform of the averaging measure.
Near a rational a/q it looks like the arithmetic coefficient times an
oscillatory integral; away from small denominators it is small.
"""

import math
from fractions import Fraction

import numpy as np
from normform import (IntPolynomial, ReducedFraction, build_sieve, khat, lhat_prime,
                      major_arc_residual, minor_arc_scan, sup_error_scan)

P = IntPolynomial((0, 1))
sieve = build_sieve(1, 10**6)

m = 10**6
for alpha in (Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(1, 3)):
    print(f"khat({alpha}) = {khat(sieve, P, m, alpha):.4f}")

# major arc at 1/2: the residual over x shrinks with x
for x in (10**4, 10**5, 10**6):
    lhs, main, res = major_arc_residual(sieve, 1, P, x, ReducedFraction(1, 2), Fraction(1, 2))
    print(f"x={x:>8d} residual/x={res:.5f}")

# the golden ratio stays away from small denominators
golden = (math.sqrt(5) - 1) / 2
for alpha, x, value, major in minor_arc_scan(sieve, P, [golden], [10**4, 10**5, 10**6]):
    print(f"x={x:>8d} |sum|/x={value:.5f}")

# the approximant tracks khat uniformly on a grid
for s in (12, 15, 18):
    err, at = sup_error_scan(sieve, 1, P, 2 ** s, grid_size=1024)
    print(f"m=2^{s}: sup error {err:.4f} at alpha={at:.4f}")

alphas = np.linspace(0, 1, 9)
print(np.round([abs(khat(sieve, P, 2**16, a) - lhat_prime(1, P, 2**16, 2.0, a)) for a in alphas], 4))
