"""
Variation of ergodic averages along norm-form primes
====================================================

Averages on a cyclic rotation converge as the scale grows. The
r-variation, jump counts and oscillation measure how fast.
"""

import numpy as np
from normform import (IntPolynomial, OpSpec, ToySystem, avg_sequence, build_sieve,
                      inequality_suite, jump_count, oscillation, v_variation, weight_transfer)

sieve = build_sieve(1, 10**5)
P = IntPolynomial((0, 1))
system = ToySystem.cyclic(101, 7)
f = np.cos(2 * np.pi * np.arange(101) / 101)

scales = [2**k for k in range(3, 17)]
seq = np.array(avg_sequence(sieve, P, system, f, 0, scales))
print(np.round(seq.real, 4))

print("V^2 =", round(v_variation(seq, 2), 4), " V^3 =", round(v_variation(seq, 3), 4))
print("jumps above 0.05:", jump_count(seq, 0.05))
print("oscillation on blocks", (1, 4, 8, 14), "=", round(oscillation(seq, (1, 4, 8, 14)), 4))

# pointwise inequalities between the operators, checked on this sequence
report = inequality_suite(seq, [OpSpec("variation", r=3), OpSpec("jump", lam=0.05),
                                OpSpec("oscillation", I=(1, 4, 8, 14))])
print("violations:", report.violations)

# switching from unit weights to log weights costs at most a constant
L = len(seq)
out = weight_transfer(np.ones(L), np.log(np.arange(2, L + 2)), seq)
print(out["case"], "C =", round(out["C"], 3), "violations:", out["report"].violations)
