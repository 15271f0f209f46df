"""Fourier-side objects: prime exponential sums, their rational approximants,
major/minor arc tests and Ionescu-Wainger frequency sets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factorize, primes_upto, totient
from .errors import (InvalidConfig, InvalidInput, InvalidParameter, NumericalFailure,
                     OutOfRange, PreconditionViolated, ResourceLimit)
from .expsums import IntPolynomial, ReducedFraction, coefficient
from .normprimes import PnSieve
from .phases import reduced_phase, value_words
from .quadfield import build_field

QUAD_TOL = 1e-10
MAX_PANELS = 1 << 16
FREQUENCY_CAP = 2_000_000


class Mollifier:
    """Even C**2 bump: 1 on |b| <= 1/4, 0 on |b| >= 1/2, quintic smootherstep between."""

    @staticmethod
    def _step(x):
        return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)

    def __call__(self, beta):
        b = np.abs(np.asarray(beta, dtype=np.float64))
        x = np.clip(4.0 * b - 1.0, 0.0, 1.0)
        out = 1.0 - self._step(x)
        return float(out) if out.ndim == 0 else out

    def at_scale(self, s: int, beta):
        """phi_s(beta) = phi(2**s * beta)."""
        return self(np.ldexp(np.asarray(beta, dtype=np.float64), s))


MOLLIFIER = Mollifier()


def _wrap(x: Fraction) -> Fraction:
    """Representative of x mod 1 in [-1/2, 1/2)."""
    x = x - math.floor(x)
    return x - 1 if x >= Fraction(1, 2) else x


_GL = {k: np.polynomial.legendre.leggauss(k) for k in (16, 24)}


def _panel_quad(f, panels: int, order: int) -> complex:
    x, wts = _GL[order]
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 / panels
    pts = mid + half * x[None, :]
    return complex(np.sum(f(pts) * wts[None, :]) * half)


def osc_integral(P: IntPolynomial, m: int, alpha) -> complex:
    """v_m(alpha) = integral over [0, 1] of e(alpha * P(m u)) du."""
    beta = float(alpha)
    if beta == 0.0:
        return 1 + 0j
    c = P.coeffs
    if P.degree == 1:
        z = 2j * math.pi * beta * c[1] * m
        if abs(z) < 1e-4:
            ratio = 1 + z / 2 + z * z / 6 + z ** 3 / 24 + z ** 4 / 120
        else:
            ratio = np.expm1(z) / z
        return complex(np.exp(2j * math.pi * beta * c[0]) * ratio)
    scaled = [ck * float(m) ** k for k, ck in enumerate(c)]

    def f(u):
        val = np.zeros_like(u)
        for ck in reversed(scaled):
            val = val * u + ck
        return np.exp(2j * math.pi * beta * val)

    swing = abs(beta) * sum(abs(k * ck) for k, ck in enumerate(scaled))
    panels = max(4, int(2 * swing) + 1)
    while panels <= MAX_PANELS:
        lo, hi = _panel_quad(f, panels, 16), _panel_quad(f, panels, 24)
        if abs(lo - hi) <= QUAD_TOL:
            return hi
        panels *= 2
    raise NumericalFailure(f"quadrature did not converge for alpha={alpha}, m={m}")


@lru_cache(maxsize=32)
def _words(coeffs: tuple, members_key: tuple, members_bytes: bytes):
    ps = np.frombuffer(members_bytes, dtype=np.int64)
    return value_words(IntPolynomial(coeffs), ps)


def _sieve_terms(sieve: PnSieve, P: IntPolynomial, m: int):
    if m > sieve.limit:
        raise OutOfRange(f"m={m} beyond sieve limit {sieve.limit}")
    ps = sieve.upto(m)
    lo, hi = _words(P.coeffs, (sieve.n, sieve.limit, len(ps)), ps.tobytes())
    return ps, lo, hi


def prime_sum(sieve: PnSieve, P: IntPolynomial, x: int, alpha, prime_powers: bool = False) -> complex:
    """Sum of log p * e(alpha P(p)) over members p <= x (optionally over p**k <= x)."""
    ps, lo, hi = _sieve_terms(sieve, P, x)
    weights = np.log(ps.astype(np.float64))
    if prime_powers:
        extra_p, extra_x = [], []
        for p in ps.tolist():
            if p * p > x:
                break
            pk = p * p
            while pk <= x:
                extra_p.append(p)
                extra_x.append(pk)
                pk *= p
        if extra_x:
            elo, ehi = value_words(P, np.array(extra_x, dtype=np.int64))
            lo, hi = np.concatenate([lo, elo]), np.concatenate([hi, ehi])
            weights = np.concatenate([weights, np.log(np.array(extra_p, dtype=np.float64))])
    ang = 2 * math.pi * reduced_phase(alpha, lo, hi)
    re = math.fsum((weights * np.cos(ang)).tolist())
    im = math.fsum((weights * np.sin(ang)).tolist())
    return complex(re, im)


def khat(sieve: PnSieve, P: IntPolynomial, m: int, alpha) -> complex:
    """(1/m) * sum over members p <= m of log p * e(alpha P(p))."""
    return prime_sum(sieve, P, m, alpha) / m


def khat_grid(sieve: PnSieve, P: IntPolynomial, m: int, grid_size: int) -> np.ndarray:
    """khat at alpha = j / grid_size for all j, via a weighted residue histogram."""
    ps, _, _ = _sieve_terms(sieve, P, m)
    r = P.eval_mod(ps, grid_size)
    hist = np.bincount(r, weights=np.log(ps.astype(np.float64)), minlength=grid_size)
    return grid_size * np.fft.ifft(hist) / m


def candidate(alpha, s: int) -> tuple[ReducedFraction, Fraction] | None:
    """The fraction a/q with 2**(s-1) <= q < 2**s within 2**(-6s-1) of alpha, if any.

    Distinct fractions with q < 2**s are more than 2**(-2s) apart, so at most
    one can lie this close; it is then the best approximation of denominator
    below 2**s, which limit_denominator finds.
    """
    a = Fraction(alpha)
    best = a.limit_denominator(2 ** s - 1)
    if best.denominator < 2 ** (s - 1):
        return None
    beta = _wrap(a - best)
    if abs(beta) >= Fraction(1, 2 ** (6 * s + 1)):
        return None
    return ReducedFraction.from_fraction(best), beta


def lhat_dyadic(F, P: IntPolynomial, m: int, s: int, alpha) -> complex:
    """Block-s part of the approximant: coefficient(a/q) v_m(beta) phi_{6s}(beta)."""
    if m < 16:
        raise InvalidParameter("m must be at least 16")
    hit = candidate(alpha, s)
    if hit is None:
        return 0j
    frac, beta = hit
    bump = MOLLIFIER.at_scale(6 * s, float(beta))
    if bump == 0.0:
        return 0j
    return coefficient(F, P, frac) * osc_integral(P, m, beta) * bump


def _max_block(bound: float) -> int:
    s = 0
    while 2 ** (s + 1) <= bound:
        s += 1
    return s


def prime_blocks(m: int, B: float) -> range:
    return range(1, _max_block(math.log(m) ** B) + 1)


def full_blocks(m: int) -> range:
    return range(1, _max_block(math.sqrt(m) / 16) + 1)


def lhat_prime(F, P: IntPolynomial, m: int, B: float, alpha) -> complex:
    """Sum of lhat_dyadic over blocks with 2**s <= (log m)**B."""
    return sum((lhat_dyadic(F, P, m, s, alpha) for s in prime_blocks(m, B)), 0j)


def lhat(F, P: IntPolynomial, m: int, alpha) -> complex:
    """Sum of lhat_dyadic over blocks with 2**s <= sqrt(m)/16."""
    return sum((lhat_dyadic(F, P, m, s, alpha) for s in full_blocks(m)), 0j)


@dataclass(frozen=True)
class ArcSpec:
    """Major arcs of radius (log x)**B / x**d around a/q with q <= (log x)**B."""
    x: int
    B: float = 2.0
    d: int = 1

    @property
    def q_max(self) -> int:
        return int(math.log(self.x) ** self.B)

    @property
    def radius(self) -> float:
        return math.log(self.x) ** self.B / float(self.x) ** self.d

    def classify(self, alpha) -> tuple[bool, ReducedFraction]:
        """(is_major, nearest fraction with q <= q_max)."""
        a = Fraction(alpha)
        best = a.limit_denominator(max(1, self.q_max))
        dist = abs(_wrap(a - best))
        return dist <= self.radius, ReducedFraction.from_fraction(best)


def major_arc_residual(sieve: PnSieve, F, P: IntPolynomial, x: int, frac: ReducedFraction,
                       alpha, B: float = 2.0):
    """(lhs, main, |lhs - main| / x) for the major-arc asymptotic at a/q."""
    F = F if not isinstance(F, int) else build_field(F)
    arc = ArcSpec(x, B, P.degree)
    beta = _wrap(Fraction(alpha) - Fraction(frac.a, frac.q))
    if frac.q > arc.q_max or abs(beta) > arc.radius:
        raise PreconditionViolated(f"alpha={alpha} is not on the major arc of {frac.a}/{frac.q}")
    lhs = prime_sum(sieve, P, x, alpha)
    main = x * coefficient(F, P, frac) * osc_integral(P, x, beta)
    return lhs, main, abs(lhs - main) / x


def minor_arc_scan(sieve: PnSieve, P: IntPolynomial, alphas, xs, B: float = 2.0):
    """Rows (alpha, x, |sum of Lambda(k) e(alpha P(k))| / x, is_major).

    The sum runs over members p and their powers p**k <= x, each weighted log p.
    Rows whose alpha sits on a major arc at scale x are flagged, not dropped.
    """
    rows = []
    for alpha in alphas:
        for x in xs:
            major, _ = ArcSpec(x, B, P.degree).classify(alpha)
            val = abs(prime_sum(sieve, P, x, alpha, prime_powers=True)) / x
            rows.append((float(alpha), int(x), val, bool(major)))
    return rows


def sup_error_table(sieve: PnSieve, F, P: IntPolynomial, m: int, B: float, grid_size: int):
    """(alphas, |khat - lhat_prime|) on the grid alpha = j / grid_size."""
    if grid_size < 256:
        raise InvalidParameter("grid_size must be at least 256")
    K = khat_grid(sieve, P, m, grid_size)
    L = np.array([lhat_prime(F, P, m, B, Fraction(j, grid_size)) for j in range(grid_size)])
    return np.arange(grid_size) / grid_size, np.abs(K - L)


def sup_error_scan(sieve: PnSieve, F, P: IntPolynomial, m: int, B: float = 2.0,
                   grid_size: int = 4096) -> tuple[float, float]:
    """sup over the grid of |khat - lhat_prime|, with the maximizing alpha."""
    alphas, err = sup_error_table(sieve, F, P, m, B, grid_size)
    j = int(np.argmax(err))
    return float(err[j]), float(alphas[j])


# Ionescu-Wainger frequency sets

def _max_exponent(p: int, N: int) -> int:
    k, pk = 0, p
    while pk <= N:
        k += 1
        pk *= p
    return k


@dataclass(frozen=True)
class IWConfig:
    rho: float
    N: int
    q_cap: int | None = None

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise InvalidConfig("rho must lie in (0, 1)")
        if self.N < 2 ** self.R:
            raise InvalidConfig(f"N={self.N} is below 2**R = {2 ** self.R}")

    @property
    def R(self) -> int:
        return int(math.floor(2 / self.rho)) + 1

    @property
    def small_bound(self) -> float:
        return self.N ** (self.rho / 2)


def _is_small(p: int, cfg: IWConfig) -> bool:
    return p <= cfg.small_bound * (1 + 1e-12)


def iw_base_set(cfg: IWConfig) -> set[int]:
    """S_rho(N): one product over small primes plus a prime power per larger prime."""
    out = set()
    smooth = 1
    for p in primes_upto(cfg.N).tolist():
        pk = p ** _max_exponent(p, cfg.N)
        if _is_small(p, cfg):
            smooth *= pk
        else:
            out.add(pk)
    out.add(smooth)
    return out


def iw_contains(cfg: IWConfig, q: int) -> bool:
    """Whether reduced fractions with denominator q lie in Sigma_{<=R}(N).

    Numerators run over all a <= q, so after reduction the admissible
    denominators are the divisors of products of at most R distinct elements.
    """
    q = int(q)
    if q < 1:
        raise InvalidInput("q must be positive")
    used_smooth = False
    count = 0
    for p, e in factorize(q) if q > 1 else ():
        if p > cfg.N or e > _max_exponent(p, cfg.N):
            return False
        if _is_small(p, cfg):
            used_smooth = True
        else:
            count += 1
    return count + used_smooth <= cfg.R


def iw_denominators(cfg: IWConfig) -> list[int]:
    """Admissible denominators q <= q_cap, in increasing order."""
    if cfg.q_cap is None:
        raise ResourceLimit("enumeration needs q_cap")
    return [q for q in range(1, cfg.q_cap + 1) if iw_contains(cfg, q)]


def iw_frequencies(cfg: IWConfig) -> list[ReducedFraction]:
    """All reduced a/q in [0, 1) with admissible q <= q_cap."""
    qs = iw_denominators(cfg)
    if sum(totient(q) for q in qs) > FREQUENCY_CAP:
        raise ResourceLimit("too many frequencies; lower q_cap")
    return [ReducedFraction(a, q) for q in qs for a in range(q) if math.gcd(a, q) == 1]


def iw_height(rho: float, frac: ReducedFraction) -> int:
    """Smallest dyadic N >= 2**R whose frequency set contains frac."""
    R = int(math.floor(2 / rho)) + 1
    N = 2 ** R
    while not iw_contains(IWConfig(rho, N), frac.q):
        N *= 2
    return N
