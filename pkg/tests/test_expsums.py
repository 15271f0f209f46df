import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from normform.arith import primes_upto, totient
from normform.errors import InvalidInput
from normform.expsums import (IntPolynomial, ReducedFraction, coefficient, decay_scan, decay_slope,
                              invariance_check, phi2, phi2_raw, weyl_sum, weyl_sum_bruteforce,
                              weyl_sums_all)
from normform.quadfield import build_field

X = IntPolynomial((0, 1))
X2 = IntPolynomial((0, 0, 1))
FIELDS = [1, 2, 3, 5, 6, 7, 10, 12]


def naive_weyl(F, P, a, q):
    """Literal double loop over u, v in [q0] with exact integer phases."""
    q0 = q * F.n0
    total = 0j
    for u in range(1, q0 + 1):
        for v in range(F.n0, q0 + 1, F.n0):
            N = F.norm(u, v)
            if math.gcd(N, q0) == 1:
                total += cmath.exp(2j * math.pi * ((a * P(N)) % q) / q)
    return total * (0.5 if q0 > 2 else 1.0)


def test_fraction_and_polynomial_types():
    assert ReducedFraction(1, 1).a == 0
    assert ReducedFraction(-1, 4).a == 3
    with pytest.raises(InvalidInput):
        ReducedFraction(2, 4)
    P = IntPolynomial.parse("1,0,3,0")
    assert P.coeffs == (1, 0, 3) and P.degree == 2
    assert P(10**12) == 3 * 10**24 + 1
    assert P.eval_mod(np.array([10**6]), 97)[0] == P(10**6) % 97
    with pytest.raises(InvalidInput):
        IntPolynomial((5,))


def test_phi2_examples():
    F = build_field(1)
    assert phi2_raw(F, 1) == 1 and phi2_raw(F, 3) == 8 and phi2_raw(F, 5) == 16
    assert phi2(F, 1) == 1 and phi2(F, 2) == 2 and phi2(F, 3) == 4


@pytest.mark.parametrize("n", FIELDS)
def test_phi2_prime_power_lifting(n):
    for p in primes_upto(50).tolist():
        for alpha in range(1, 5):
            if p ** alpha > 2500:
                break
            assert phi2_raw(n, p ** alpha, "brute") == phi2_raw(n, p, "brute") * p ** (2 * alpha - 2)


@pytest.mark.parametrize("n", FIELDS)
def test_phi2_formula_matches_enumeration(n):
    for q in range(1, 301):
        assert phi2_raw(n, q, "formula") == phi2_raw(n, q, "brute")


def test_weyl_sum_examples():
    F = build_field(1)
    assert weyl_sum(F, X, ReducedFraction(1, 1)) == 1
    assert weyl_sum(F, X, ReducedFraction(1, 2)) == -2
    assert weyl_sum(F, X, ReducedFraction(1, 4)) == pytest.approx(naive_weyl(F, X, 1, 4), abs=1e-12)
    assert coefficient(F, X, ReducedFraction(1, 1)) == 0.5
    assert coefficient(F, X, ReducedFraction(1, 2)) == -0.5


@pytest.mark.parametrize("n", [1, 3, 5, 12])
def test_weyl_sum_matches_naive_loop(n):
    F = build_field(n)
    for P in (X, X2, IntPolynomial((2, -1, 0, 1))):
        for q in range(1, 13):
            for a in range(q):
                if math.gcd(a, q) == 1:
                    assert weyl_sum(F, P, ReducedFraction(a, q)) == pytest.approx(
                        naive_weyl(F, P, a, q), abs=1e-9)


@pytest.mark.parametrize("n", FIELDS)
def test_crt_path_matches_enumeration(n):
    F = build_field(n)
    for P in (X, X2):
        for q in range(1, 201, 3 if n > 5 else 1):
            S = weyl_sums_all(F, P, q)
            for a in range(q):
                if math.gcd(a, q) == 1:
                    brute = weyl_sum_bruteforce(F, P, ReducedFraction(a, q))
                    assert abs(S[a] - brute) <= 1e-9
                    assert abs(weyl_sum(F, P, ReducedFraction(a, q)) - brute) <= 1e-9


def test_large_prime_local_sum_uses_unit_count():
    # q0 = 2003**2 is past the pair-enumeration cap, so the unit-count path runs
    F = build_field(1)
    S = weyl_sum(F, X, ReducedFraction(1, 2003 ** 2))
    # for P(x) = x the sum over units of a primitive character of conductor p**2 vanishes
    assert abs(S) <= 1e-6
    # a prime modulus still small enough for the brute-force histogram
    S = weyl_sum(F, X, ReducedFraction(5, 2003))
    assert S == pytest.approx(weyl_sum_bruteforce(F, X, ReducedFraction(5, 2003)), abs=1e-6)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FIELDS), st.lists(st.integers(-5, 5), min_size=2, max_size=4),
       st.integers(1, 60), st.integers(0, 10**6))
def test_coefficient_magnitude_at_most_one(n, coeffs, q, a):
    if all(c == 0 for c in coeffs[1:]):
        coeffs[-1] = 1
    if math.gcd(a, q) != 1:
        return
    c = coefficient(n, IntPolynomial(tuple(coeffs)), ReducedFraction(a, q))
    assert abs(c) <= 1 + 1e-12


def test_invariance_examples():
    assert invariance_check(1, X, ReducedFraction(1, 3), 1) == 0
    assert invariance_check(1, X2, ReducedFraction(1, 3), 2) <= 1e-9
    assert invariance_check(5, X, ReducedFraction(2, 5), 3) <= 1e-9


def test_decay_scan():
    rows = decay_scan(1, X, 200)
    assert rows[0] == (1, 1.0)
    for q, v in rows:
        if q > 2 and all(q % p for p in range(2, math.isqrt(q) + 1)):
            assert v * q * q <= 2 * q + 1e-9
    assert decay_slope(rows) < 0


def test_unit_count_path_matches_enumeration(monkeypatch):
    import normform.expsums as es
    F = build_field(2)
    cases = [(a, q) for q in (9, 25, 27, 49, 121, 11 * 13) for a in (1, 2, q - 1) if math.gcd(a, q) == 1]
    expected = {c: weyl_sum_bruteforce(F, X2, ReducedFraction(*c)) for c in cases}
    monkeypatch.setattr(es, "LOCAL_PAIR_CAP", 0)
    es._local_histogram.cache_clear()
    try:
        for c, val in expected.items():
            assert weyl_sum(F, X2, ReducedFraction(*c)) == pytest.approx(val, abs=1e-9)
    finally:
        es._local_histogram.cache_clear()
