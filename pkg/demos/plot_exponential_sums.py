"""
Complete exponential sums over the norm form
============================================

The main term at a rational frequency a/q is governed by the sum
S(a, q) of e(a P(N(u, v)) / q) over unit norms. Its normalized size
decays as q grows.
"""

from fractions import Fraction

from normform import IntPolynomial, ReducedFraction, coefficient, phi2, weyl_sum
from normform.expsums import decay_scan, decay_slope

P = IntPolynomial.parse("0,1")
print("S(1,2) =", weyl_sum(1, P, ReducedFraction(1, 2)))
print("coefficient at 1/2 =", coefficient(1, P, ReducedFraction(1, 2)))

for q in (3, 5, 7, 9, 25):
    print(f"q={q:2d} phi2={str(phi2(1, q)):>5}  coefficient(1/q)={coefficient(1, P, ReducedFraction(1, q)):.5f}")

# largest normalized |S| for each q, and a fitted power of q
rows = decay_scan(1, P, 200)
print(f"fitted decay exponent for P(x) = x: {decay_slope(rows):.2f}")
rows = decay_scan(1, IntPolynomial.parse("0,0,1"), 200)
print(f"fitted decay exponent for P(x) = x^2: {decay_slope(rows):.2f}")
print(Fraction(3, 7), "->", coefficient(5, P, ReducedFraction.from_fraction(Fraction(3, 7))))
