"""Complete exponential sums over the norm form and the coefficients built from them.

For a modulus q we write q0 = q*n0. The complete sum is

    S(a, q) = w(q0) * sum_{u, v mod q0, n0 | v, N(u+v*w) coprime to q0} e(a P(N) / q)

with w(q0) = 1/2 when q0 > 2 and 1 otherwise. Everything below reduces P(N)
modulo the relevant prime power in exact integers before forming roots of unity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factorize, kronecker, totient
from .errors import ArithmeticOverflow, InvalidInput, InvalidParameter, ResourceLimit
from .quadfield import QuadField, build_field

BRUTE_PHI2_MAX = 1000
LOCAL_PAIR_CAP = 4_000_000
LOCAL_UNIT_CAP = 10_000_000
_MOD_CAP = 1 << 31


@dataclass(frozen=True)
class ReducedFraction:
    """a/q in lowest terms with 0 <= a < q (0/1 stands for the integers)."""
    a: int
    q: int

    def __post_init__(self):
        a, q = int(self.a), int(self.q)
        if q < 1:
            raise InvalidInput(f"denominator must be positive, got {q}")
        if math.gcd(a, q) != 1:
            raise InvalidInput(f"{a}/{q} is not reduced")
        object.__setattr__(self, "a", a % q)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "ReducedFraction":
        x = Fraction(x)
        return cls(x.numerator % x.denominator, x.denominator)

    def __float__(self):
        return self.a / self.q


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial c0 + c1 x + ... + cd x**d of degree at least one."""
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) < 2:
            raise InvalidInput("polynomial must have degree >= 1")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError as exc:
            raise InvalidInput(f"bad polynomial {text!r}") from exc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Exact value for Python ints, float64 for arrays."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def eval_mod(self, x, m: int):
        """P(x) mod m for an integer array x, computed in int64 Horner steps."""
        if m >= _MOD_CAP:
            raise ArithmeticOverflow(f"modulus {m} too large for int64 reduction")
        x = np.asarray(x, dtype=np.int64) % m
        out = np.zeros_like(x)
        for c in reversed(self.coeffs):
            out = (out * x + c % m) % m
        return out

    def __str__(self):
        return ",".join(map(str, self.coeffs))


def _as_field(F) -> QuadField:
    return F if isinstance(F, QuadField) else build_field(int(F))


def _norm_mod(F: QuadField, u, v, m: int):
    t, mu = F.omega_trace, F.omega_norm % m
    return (u * u + t * u * v + mu * (v * v % m)) % m


def w(q0: int) -> Fraction:
    return Fraction(1, 2) if q0 > 2 else Fraction(1)


def _phi2_raw_brute(F: QuadField, q: int) -> int:
    r = np.arange(q, dtype=np.int64)
    unit = np.tile(np.gcd(r, q) == 1, 3)  # indexed by N mod q plus up to 2q
    sq = (r * r % q).astype(np.int32)
    msq = (F.omega_norm % q * sq % q).astype(np.int32)
    N = sq[:, None] + msq[None, :]
    if F.omega_trace:
        N += (np.outer(r, r) % q).astype(np.int32)
    return int(np.count_nonzero(unit[N]))


def _phi2_prime(F: QuadField, p: int) -> int:
    if p == 2:
        roots = sum(1 for x in range(2) if (x * x + F.omega_trace * x + F.omega_norm) % 2 == 0)
    else:
        roots = 1 + kronecker(F.omega_trace ** 2 - 4 * F.omega_norm, p)
    return p * p - 1 - (p - 1) * roots


@lru_cache(maxsize=4096)
def _phi2_raw_cached(n: int, q: int, brute: bool) -> int:
    F = build_field(n)
    if brute:
        return _phi2_raw_brute(F, q)
    return math.prod(_phi2_prime(F, p) * p ** (2 * e - 2) for p, e in factorize(q))


def phi2_raw(F, q: int, method: str = "auto") -> int:
    """#{(u, v) mod q : N(u + v*w) coprime to q}.

    ``method`` is "brute" (q**2 enumeration), "formula" (local counts and CRT)
    or "auto", which enumerates up to q = 1000.
    """
    F = _as_field(F)
    q = int(q)
    if q < 1:
        raise InvalidInput("q must be positive")
    if q == 1:
        return 1
    brute = method == "brute" or (method == "auto" and q <= BRUTE_PHI2_MAX)
    return _phi2_raw_cached(F.n, q, brute)


def phi2(F, q: int) -> Fraction:
    """phi2'(q)/2 for q > 2, phi2'(q) for q in {1, 2}."""
    raw = phi2_raw(F, q)
    return Fraction(raw, 2) if q > 2 else Fraction(raw)


def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@lru_cache(maxsize=4096)
def _local_histogram(n: int, coeffs: tuple, p: int, e: int, f: int, g: int) -> np.ndarray:
    """H[m] = #{(u, v) mod p**e : p**g | v, N coprime to p, P(N) = m mod p**f}."""
    F = build_field(n)
    P = IntPolynomial(coeffs)
    pe, pf = p ** e, p ** f
    pairs = pe * (pe // p ** g)
    if pairs <= LOCAL_PAIR_CAP:
        u = np.arange(pe, dtype=np.int64)[:, None]
        v = np.arange(0, pe, p ** g, dtype=np.int64)[None, :]
        N = _norm_mod(F, u, v, pe).ravel()
        N = N[N % p != 0]
        return np.bincount(P.eval_mod(N, pf), minlength=pf).astype(np.float64)
    if g or F.disc % p == 0 or p == 2 or pe > LOCAL_UNIT_CAP:
        raise ResourceLimit(f"local sum at {p}**{e} is too large to enumerate")
    # unramified odd p: each unit residue is hit p**(e-1) * (p - chi) times
    mult = p ** (e - 1) * (p - kronecker(F.disc, p))
    m = np.arange(pe, dtype=np.int64)
    m = m[m % p != 0]
    return mult * np.bincount(P.eval_mod(m, pf), minlength=pf).astype(np.float64)


def _local_data(F: QuadField, P: IntPolynomial, q: int, M: int | None = None):
    """Per prime p of M (default q0): (p**f, q / p**f, histogram)."""
    M = q * F.n0 if M is None else M
    out = []
    for p, e in factorize(M) if M > 1 else ():
        f = _valuation(q, p)
        g = _valuation(F.n0, p)
        H = _local_histogram(F.n, P.coeffs, p, e, f, g)
        out.append((p ** f, q // p ** f, H))
    return out


def _local_sum(H: np.ndarray, pf: int, c: int) -> complex:
    k = (c * np.arange(pf, dtype=np.int64)) % pf
    return complex(np.dot(H, np.exp(2j * np.pi * k / pf)))


def _snap(z, scale: float):
    """Zero out real or imaginary parts that are rounding noise relative to scale."""
    tol = 1e-12 * max(scale, 1.0)
    re = np.where(np.abs(np.real(z)) < tol, 0.0, np.real(z))
    im = np.where(np.abs(np.imag(z)) < tol, 0.0, np.imag(z))
    return re + 1j * im


def weyl_sum(F, P: IntPolynomial, frac: ReducedFraction) -> complex:
    """S(a, q), evaluated as a product of local sums over the prime powers of q0."""
    F = _as_field(F)
    a, q = frac.a, frac.q
    q0 = q * F.n0
    total = complex(w(q0))
    for pf, rest, H in _local_data(F, P, q):
        c = a * pow(rest, -1, pf) % pf if pf > 1 else 0
        total *= _local_sum(H, pf, c)
    return complex(_snap(total, q0 * q0))


def weyl_sums_all(F, P: IntPolynomial, q: int) -> np.ndarray:
    """S(a, q) for every a in [0, q); entries with gcd(a, q) > 1 are set to nan."""
    F = _as_field(F)
    a = np.arange(q, dtype=np.int64)
    total = np.full(q, complex(w(q * F.n0)), dtype=np.complex128)
    for pf, rest, H in _local_data(F, P, q):
        if pf == 1:
            total *= H.sum()
            continue
        G = pf * np.fft.ifft(H)  # G[c] = sum_m H[m] e(c m / pf)
        c = (a % pf) * pow(rest, -1, pf) % pf
        total *= G[c]
    total = _snap(total, (q * F.n0) ** 2)
    total[np.gcd(a, q) != 1] = np.nan
    return total


@lru_cache(maxsize=256)
def _pair_histogram(n: int, coeffs: tuple, q: int, M: int) -> np.ndarray:
    """#{(u, v) in [M]**2 : n0 | v, N coprime to M, P(N) = m mod q} by enumeration."""
    F = build_field(n)
    if M * M // F.n0 > 4 * LOCAL_PAIR_CAP:
        raise ResourceLimit(f"enumeration over [{M}]^2 is too large")
    u = np.arange(1, M + 1, dtype=np.int64)[:, None]
    v = np.arange(F.n0, M + 1, F.n0, dtype=np.int64)[None, :]
    N = _norm_mod(F, u, v, M).ravel()
    N = N[np.gcd(N, M) == 1]
    return np.bincount(IntPolynomial(coeffs).eval_mod(N, q), minlength=q).astype(np.float64)


def weyl_sum_bruteforce(F, P: IntPolynomial, frac: ReducedFraction, M: int | None = None,
                        weighted: bool = True) -> complex:
    """Direct enumeration over u, v in [M] (default M = q0)."""
    F = _as_field(F)
    q0 = frac.q * F.n0
    M = q0 if M is None else M
    H = _pair_histogram(F.n, P.coeffs, frac.q, M)
    s = _local_sum(H, frac.q, frac.a)
    return s * float(w(q0)) if weighted else s


def coefficient(F, P: IntPolynomial, frac: ReducedFraction) -> complex:
    """S(a, q) / (R_n * phi2(q0))."""
    F = _as_field(F)
    q0 = frac.q * F.n0
    return weyl_sum(F, P, frac) / (F.Rn * float(phi2(F, q0)))


def invariance_check(F, P: IntPolynomial, frac: ReducedFraction, k: int) -> float:
    """|normalized sum over [q0] - normalized sum over [k q0]|, both by enumeration."""
    F = _as_field(F)
    if not 1 <= k <= 8:
        raise InvalidParameter("k must lie in 1..8")
    if k == 1:
        return 0.0
    q0 = frac.q * F.n0
    lhs = weyl_sum_bruteforce(F, P, frac, q0, weighted=False) / phi2_raw(F, q0)
    rhs = weyl_sum_bruteforce(F, P, frac, k * q0, weighted=False) / phi2_raw(F, k * q0)
    return abs(lhs - rhs)


def decay_scan(F, P: IntPolynomial, q_max: int) -> list[tuple[int, float]]:
    """Rows (q, max over coprime a of |S(a, q)| / q**2) for q = 1..q_max."""
    F = _as_field(F)
    if q_max > 500:
        raise InvalidParameter("q_max must be at most 500")
    rows = []
    for q in range(1, q_max + 1):
        S = weyl_sums_all(F, P, q)
        rows.append((q, float(np.nanmax(np.abs(S))) / q ** 2))
    return rows


def decay_slope(rows, q_min: int = 2) -> float:
    """Least-squares slope of log(max|S|/q**2) against log q."""
    pts = [(math.log(q), math.log(v)) for q, v in rows if q >= q_min and v > 0]
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])
