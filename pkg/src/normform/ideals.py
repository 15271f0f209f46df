"""Integral ideals of O_K, K = Q(sqrt(-n)), kept in factored form.

A prime ideal is tagged by the rational prime below it, its splitting kind and,
for split and ramified primes, the root r of ``x**2 - t*x + mu`` modulo p (the
ideal is then (p, w - r)).  Everything multiplicative (tau, mu, Lambda, divisor
enumeration, Vaughan's identity) runs on the exponent vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

import numpy as np

from .arith import is_prime, kronecker, primes_upto, sqrt_mod_all
from .errors import InvalidInput, PreconditionViolated, ResourceLimit
from .quadfield import QuadField

KINDS = ("ramified", "split_plus", "split_minus", "inert")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}

ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class PrimeIdealTag:
    p: int
    kind: str
    root: int | None = None

    @property
    def norm(self) -> int:
        return self.p * self.p if self.kind == "inert" else self.p

    def sort_key(self):
        return (self.norm, self.p, _KIND_RANK[self.kind],
                -1 if self.root is None else self.root)

    def __lt__(self, other: "PrimeIdealTag") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        r = "" if self.root is None else f", r={self.root}"
        return f"P({self.p}, {self.kind}{r})"


def _roots_mod_p(F: QuadField, p: int) -> list[int]:
    t, mu = F.omega_trace, F.omega_norm
    if p == 2:
        return [r for r in range(2) if (r * r - t * r + mu) % 2 == 0]
    inv2 = pow(2, -1, p)
    return sorted({(t + s) * inv2 % p for s in sqrt_mod_all(F.disc, p)})


@lru_cache(maxsize=None)
def _splitting(F: QuadField, p: int) -> tuple[PrimeIdealTag, ...]:
    chi = kronecker(F.disc, p)
    if chi == -1:
        return (PrimeIdealTag(p, "inert"),)
    roots = _roots_mod_p(F, p)
    if chi == 0:
        assert len(roots) == 1
        return (PrimeIdealTag(p, "ramified", roots[0]),)
    assert len(roots) == 2
    return (PrimeIdealTag(p, "split_plus", roots[0]),
            PrimeIdealTag(p, "split_minus", roots[1]))


def splitting_type(F: QuadField, p: int) -> list[PrimeIdealTag]:
    """Prime ideals of O_K above the rational prime p."""
    if not is_prime(int(p)):
        raise InvalidInput(f"{p} is not prime")
    return list(_splitting(F, int(p)))


@dataclass(frozen=True)
class IdealFactorization:
    factors: tuple[tuple[PrimeIdealTag, int], ...] = ()
    norm: int | None = None

    def __post_init__(self):
        ordered = tuple(sorted(((t, int(e)) for t, e in self.factors if e),
                               key=lambda te: te[0].sort_key()))
        object.__setattr__(self, "factors", ordered)
        if any(e < 0 for _, e in ordered):
            raise InvalidInput("exponents must be positive")
        expected = math.prod(t.norm ** e for t, e in ordered)
        if self.norm is None:
            object.__setattr__(self, "norm", expected)
        elif self.norm != expected:
            raise InvalidInput(f"cached norm {self.norm} != {expected}")

    @classmethod
    def from_dict(cls, factors: dict) -> "IdealFactorization":
        items = tuple((t, e) for t, e in factors.items() if e)
        return cls(items, math.prod(t.norm ** e for t, e in items))

    @classmethod
    def prime(cls, tag: PrimeIdealTag, e: int = 1) -> "IdealFactorization":
        return cls(((tag, e),), tag.norm ** e)

    def as_dict(self) -> dict:
        return dict(self.factors)

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def __mul__(self, other: "IdealFactorization") -> "IdealFactorization":
        d = self.as_dict()
        for t, e in other.factors:
            d[t] = d.get(t, 0) + e
        return IdealFactorization(tuple(d.items()), self.norm * other.norm)

    def divides(self, other: "IdealFactorization") -> bool:
        od = other.as_dict()
        return all(od.get(t, 0) >= e for t, e in self.factors)

    def quotient(self, d: "IdealFactorization") -> "IdealFactorization":
        out = self.as_dict()
        for t, e in d.factors:
            out[t] = out.get(t, 0) - e
            if out[t] < 0:
                raise InvalidInput("not a divisor")
        return IdealFactorization(tuple(out.items()), self.norm // d.norm)

    def coprime_to(self, other: "IdealFactorization") -> bool:
        od = other.as_dict()
        return not any(t in od for t, _ in self.factors)

    def divisors(self) -> list["IdealFactorization"]:
        tags = [t for t, _ in self.factors]
        ranges = [range(e + 1) for _, e in self.factors]
        return [IdealFactorization(tuple(zip(tags, es)),
                                   math.prod(t.norm ** e for t, e in zip(tags, es)))
                for es in product(*ranges)]

    def sort_key(self):
        return (self.norm, tuple((t.sort_key(), e) for t, e in self.factors))

    def __repr__(self):
        if not self.factors:
            return "(1)"
        return "*".join(f"{t!r}^{e}" if e > 1 else repr(t) for t, e in self.factors)


UNIT = IdealFactorization()


def prime_ideals_upto(F: QuadField, x: int) -> list[PrimeIdealTag]:
    """All prime ideals of norm <= x in the fixed tag order."""
    out = []
    for p in primes_upto(x):
        for tag in _splitting(F, int(p)):
            if tag.norm <= x:
                out.append(tag)
    out.sort(key=PrimeIdealTag.sort_key)
    return out


def enumerate_ideals(F: QuadField, x: int, cap: int = ENUMERATION_CAP) -> Iterator[IdealFactorization]:
    """Every integral ideal of norm <= x, ordered by (norm, tag order)."""
    x = int(x)
    if x < 1:
        raise InvalidInput("x must be >= 1")
    if x > cap:
        raise ResourceLimit(f"x={x} exceeds enumeration cap {cap}")
    primes = prime_ideals_upto(F, x)
    found: list[tuple] = []

    def rec(start: int, norm: int, acc: list):
        found.append((norm, tuple(acc)))
        for i in range(start, len(primes)):
            tag = primes[i]
            m = norm * tag.norm
            if m > x:
                break
            e = 1
            while m <= x:
                acc.append((tag, e))
                rec(i + 1, m, acc)
                acc.pop()
                m *= tag.norm
                e += 1

    rec(0, 1, [])
    ideals = [IdealFactorization(f, nm) for nm, f in found]
    ideals.sort(key=IdealFactorization.sort_key)
    yield from ideals


def tau(ideal: IdealFactorization) -> int:
    return math.prod(e + 1 for _, e in ideal.factors)


def mobius(ideal: IdealFactorization) -> int:
    if any(e >= 2 for _, e in ideal.factors):
        return 0
    return -1 if len(ideal.factors) % 2 else 1


def von_mangoldt(ideal: IdealFactorization) -> float:
    if len(ideal.factors) != 1:
        return 0.0
    return math.log(ideal.factors[0][0].norm)


def _local_tau_table(kind: str, emax: int, k: int) -> np.ndarray:
    """sum of tau**k over ideals of norm p**e supported above one rational prime."""
    out = np.zeros(emax + 1, dtype=np.int64)
    for e in range(emax + 1):
        if kind in ("split_plus", "split"):
            out[e] = sum(((i + 1) * (e - i + 1)) ** k for i in range(e + 1))
        elif kind == "ramified":
            out[e] = (e + 1) ** k
        else:
            out[e] = (e // 2 + 1) ** k if e % 2 == 0 else 0
    return out


def norm_coefficients(F: QuadField, x: int, k: int = 0) -> np.ndarray:
    """c[m] = sum over ideals of norm exactly m of tau(ideal)**k, for m <= x.

    Computed multiplicatively from the splitting of each rational prime; no
    ideal objects are materialized.
    """
    x = int(x)
    c = np.ones(x + 1, dtype=np.int64)
    c[0] = 0
    for p in primes_upto(x):
        p = int(p)
        kind = _splitting(F, p)[0].kind
        emax = 1
        while p ** (emax + 1) <= x:
            emax += 1
        table = _local_tau_table(kind, emax, k)
        ep = np.zeros(x // p + 1, dtype=np.int64)  # exponent of p in m = j*p
        pe = p
        e = 1
        while pe <= x:
            ep[pe // p::pe // p] = e
            pe *= p
            e += 1
        c[p::p] *= table[ep[1:]]
    return c


def ideal_sums(F: QuadField, x: int, k: int, cap: int = ENUMERATION_CAP) -> tuple[int, int]:
    """(number of ideals with norm <= x, sum of tau**k over them)."""
    x = int(x)
    if x < 1 or not 0 <= k <= 4:
        raise InvalidInput("need x >= 1 and 0 <= k <= 4")
    if x > cap:
        raise ResourceLimit(f"x={x} exceeds enumeration cap {cap}")
    count = int(norm_coefficients(F, x, 0).sum())
    total = count if k == 0 else int(norm_coefficients(F, x, k).sum())
    return count, total


def vaughan_check(F: QuadField, ideal: IdealFactorization, U: int, V: int):
    """Evaluate the three sums of Vaughan's identity for one ideal.

    Returns (S1, S2, S3, residual) with residual = S1 - S2 + S3 - Lambda(ideal).
    """
    if ideal.norm <= U:
        raise PreconditionViolated(f"identity needs N(ideal) > U (got {ideal.norm} <= {U})")
    divs = ideal.divisors()
    s1 = []
    for d in divs:
        if d.norm <= V:
            mu = mobius(d)
            if mu:
                s1.append(mu * math.log(ideal.norm // d.norm))
    s2, s3 = [], []
    for m in divs:
        lam = von_mangoldt(m)
        if not lam:
            continue
        rest = ideal.quotient(m)
        for d in rest.divisors():
            mu = mobius(d)
            if not mu:
                continue
            if m.norm <= U and d.norm <= V:
                s2.append(lam * mu)
            elif m.norm > U and d.norm > V:
                s3.append(lam * mu)
    S1, S2, S3 = math.fsum(s1), math.fsum(s2), math.fsum(s3)
    return S1, S2, S3, S1 - S2 + S3 - von_mangoldt(ideal)


def type2_coefficients(F: QuadField, which: str, ideal_a: IdealFactorization,
                       ideal_b: IdealFactorization, U: int, V: int) -> tuple[float, float]:
    """Bilinear coefficients (x_a, y_b) for the sum ``which`` in {S1, S2, S3}."""
    if which == "S1":
        return float(mobius(ideal_a)), math.log(ideal_b.norm)
    if which == "S2":
        x = float(mobius(ideal_a)) if ideal_a.norm < V else 0.0
        y = math.fsum(von_mangoldt(m) for m in ideal_b.divisors() if m.norm <= U)
        return x, y
    if which == "S3":
        x = float(sum(mobius(d) for d in ideal_a.divisors() if d.norm > V))
        y = von_mangoldt(ideal_b) if ideal_b.norm > U else 0.0
        return x, y
    raise InvalidInput(f"unknown sum {which!r}")
