"""
Primes of the form u^2 + n v^2
==============================

Sieve the primes represented by x^2 + n y^2, compare their weighted
density with 1/(2h), and look at how they spread over residue classes.
"""

import math

import numpy as np
from normform import build_field, build_sieve, density_report, is_member, residue_form_count

# the sieve writes a small binary cache under ./cache (or $NORMFORM_CACHE)
x = 10**6
for n in (1, 2, 5, 14):
    h = build_field(n).class_number
    sieve = build_sieve(n, x)
    raw, weighted, ref = density_report(n, x, sieve)
    print(f"n={n:2d} h={h} members<=1e6: {sieve.count(x):6d}  weighted/x={weighted:.4f}  1/(2h)={ref:.4f}")

# Membership of single primes goes through Cornacchia's algorithm
print([p for p in (2, 3, 5, 7, 11, 13, 17, 29) if is_member(1, p)[0]])

# Every unit residue b mod a split prime is hit by exactly p - 1 pairs
p = 13
print("pairs per residue mod 13:", {b: residue_form_count(1, p, b) for b in range(1, p)})

# The members of P_1 are the primes that are 1 mod 4, plus 2
sieve = build_sieve(1, 10**5)
print(np.unique(sieve.members % 4, return_counts=True))
print(f"log-weighted count up to 10^5: {sum(math.log(p) for p in sieve.members.tolist()):.1f}")
