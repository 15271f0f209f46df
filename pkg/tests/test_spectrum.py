import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from normform.errors import InvalidConfig, PreconditionViolated
from normform.expsums import IntPolynomial, ReducedFraction, coefficient
from normform.normprimes import weighted_count
from normform.phases import reduced_phase, value_words
from normform.quadfield import build_field
from normform.spectrum import (MOLLIFIER, ArcSpec, IWConfig, candidate, iw_base_set, iw_contains,
                               iw_denominators, iw_frequencies, iw_height, khat, khat_grid, lhat,
                               lhat_dyadic, lhat_prime, major_arc_residual, minor_arc_scan,
                               osc_integral, prime_blocks, sup_error_scan)

X = IntPolynomial((0, 1))
F1 = build_field(1)


def test_mollifier_sandwich_and_smoothness():
    b = np.linspace(-1, 1, 100_001)
    phi = MOLLIFIER(b)
    assert np.all((phi >= 0) & (phi <= 1))
    assert np.all(phi[np.abs(b) <= 0.25] == 1)
    assert np.all(phi[np.abs(b) >= 0.5] == 0)
    assert np.array_equal(phi, MOLLIFIER(-b))
    # first and second differences stay bounded across the joins
    h = b[1] - b[0]
    d2 = np.diff(phi, 2) / h ** 2
    assert np.max(np.abs(d2)) < 200
    assert MOLLIFIER.at_scale(6, 2.0 ** -8) == 1.0 and MOLLIFIER.at_scale(6, 2.0 ** -7) == 0.0


def test_phase_reduction_is_exact_for_large_values():
    P = IntPolynomial((3, -7, 0, 5))
    xs = np.array([9_999_991, 7_654_321, 12_345, 2])
    lo, hi = value_words(P, xs)
    for alpha in (Fraction(1, 7), 0.6180339887498949, 1e-9):
        ph = reduced_phase(alpha, lo, hi)
        exact = [float((Fraction(alpha) * P(int(x))) % 1) for x in xs]
        d = np.abs(ph - exact)
        assert np.all(np.minimum(d, 1 - d) < 1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**6), st.floats(-1e-3, 1e-3).filter(lambda a: a != 0))
def test_osc_integral_linear_closed_form(m, alpha):
    z = 2j * math.pi * alpha * m
    exact = (cmath.exp(z) - 1) / z if abs(z) > 1e-6 else 1 + z / 2
    assert osc_integral(X, m, alpha) == pytest.approx(exact, abs=1e-10)


def test_osc_integral_quadrature_against_dense_rule():
    P = IntPolynomial((1, 0, 1))
    for m, beta in [(100, 1e-3), (1000, 2e-5), (30, 0.3)]:
        u = (np.arange(400_000) + 0.5) / 400_000
        ref = np.mean(np.exp(2j * np.pi * beta * (1 + (m * u) ** 2)))
        got = osc_integral(P, m, beta)
        assert abs(got - ref) < 1e-8 and abs(got) <= 1 + 1e-12
    assert osc_integral(P, 10, 0) == 1


def test_khat_values(sieve1):
    m = 10**6
    assert khat(sieve1, X, m, 0) == pytest.approx(weighted_count(sieve1, m) / m, rel=1e-12)
    half = khat(sieve1, X, m, 0.5)
    assert abs(half.real + 0.5) <= 0.05
    a = 0.3141
    assert khat(sieve1, X, m, -a) == pytest.approx(khat(sieve1, X, m, a).conjugate(), abs=1e-12)
    grid = khat_grid(sieve1, X, 20_000, 512)
    for j in (0, 1, 77, 256, 400):
        assert grid[j] == pytest.approx(khat(sieve1, X, 20_000, Fraction(j, 512)), abs=1e-9)
    assert np.all(np.abs(grid) <= abs(grid[0]) + 1e-12)


def test_candidate_blocks():
    assert candidate(Fraction(1, 2), 2)[0] == ReducedFraction(1, 2)
    assert candidate(Fraction(1, 2), 3) is None
    assert candidate(Fraction(3, 7) + Fraction(1, 2 ** 20), 3)[0] == ReducedFraction(3, 7)
    assert candidate(Fraction(3, 7) + Fraction(1, 2 ** 18), 3) is None
    assert candidate(0.999999999, 1)[0] == ReducedFraction(0, 1)


def test_lhat_examples():
    m = 2 ** 20
    for a, q in [(1, 2), (1, 3), (2, 5), (3, 8)]:
        frac = ReducedFraction(a, q)
        assert lhat_prime(F1, X, m, 2, Fraction(a, q)) == pytest.approx(coefficient(F1, X, frac))
    assert lhat_prime(F1, X, m, 2, 0.5 + 1e-9) == pytest.approx(-0.5, abs=2e-3)
    far = 0.5 + 2 ** -10
    assert lhat_prime(F1, X, m, 2, far) == 0


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1, exclude_max=True))
def test_lhat_regrouping(alpha):
    m = 2 ** 16
    total = sum(lhat_dyadic(F1, X, m, s, alpha) for s in prime_blocks(m, 2))
    assert abs(lhat_prime(F1, X, m, 2, alpha) - total) <= 1e-12
    for s in range(1, 7):
        bound = max(abs(coefficient(F1, X, ReducedFraction(a, q)))
                    for q in range(2 ** (s - 1), 2 ** s) for a in range(q) if math.gcd(a, q) == 1)
        assert abs(lhat_dyadic(F1, X, m, s, alpha)) <= bound + 1e-12


def test_lhat_block_range():
    m = 2 ** 16  # sqrt(m)/16 = 16, so blocks 1..4
    near = Fraction(1, 17) + Fraction(1, 2 ** 40)  # q = 17 sits in block 5
    assert lhat_dyadic(F1, X, m, 5, near) != 0
    assert lhat(F1, X, m, near) == 0


def test_major_arc(sieve1):
    lhs, main, res = major_arc_residual(sieve1, F1, X, 10**6, ReducedFraction(1, 2), Fraction(1, 2))
    assert res <= 0.05 and main == pytest.approx(-5e5)
    lhs, main, _ = major_arc_residual(sieve1, F1, X, 10**5, ReducedFraction(0, 1), 0)
    assert lhs.real == pytest.approx(weighted_count(sieve1, 10**5))
    assert main == pytest.approx(10**5 * 0.5)
    with pytest.raises(PreconditionViolated):
        major_arc_residual(sieve1, F1, X, 10**6, ReducedFraction(1, 2), 0.3)


def test_minor_arc_scan(sieve1):
    golden = (math.sqrt(5) - 1) / 2
    rows = minor_arc_scan(sieve1, X, [golden, 1 / 3], [10**4, 10**5, 10**6])
    vals = [r[2] for r in rows[:3]]
    assert vals[0] > vals[1] > vals[2]
    assert all(r[3] for r in rows[3:])
    assert ArcSpec(10**6).classify(1 / 3) == (True, ReducedFraction(1, 3))
    total = minor_arc_scan(sieve1, X, [0.0], [10**4])[0][2]
    assert all(r[2] <= total + 1e-12 for r in rows if r[1] == 10**4)


def test_sup_error_small(sieve1_small):
    err, where = sup_error_scan(sieve1_small, F1, X, 2 ** 14, 2, 256)
    assert err >= 0 and 0 <= where < 1
    assert abs(khat(sieve1_small, X, 2 ** 14, 0.5) - lhat_prime(F1, X, 2 ** 14, 2, 0.5)) <= err + 1e-12


def test_iw_base_set_example():
    assert iw_base_set(IWConfig(0.5, 32)) == {32, 27, 25, 7, 11, 13, 17, 19, 23, 29, 31}
    with pytest.raises(InvalidConfig):
        IWConfig(0.5, 16)


def test_iw_property_a_and_heights():
    cfg = IWConfig(0.5, 64, q_cap=10**4)
    qs = set(iw_denominators(cfg))
    assert set(range(1, 65)) <= qs and 1 in qs
    assert ReducedFraction(0, 1) in iw_frequencies(IWConfig(0.5, 32, q_cap=40))
    # nested sets: contained at N gives contained at 2N
    small = IWConfig(0.5, 32, q_cap=10**4)
    bigger = IWConfig(0.5, 64, q_cap=10**4)
    assert set(iw_denominators(small)) <= set(iw_denominators(bigger))
    for q in list(qs)[:300]:
        h = iw_height(0.5, ReducedFraction(1, q))
        assert iw_contains(IWConfig(0.5, h), q)
        if h > 32:
            assert not iw_contains(IWConfig(0.5, h // 2), q)
