"""Ergodic averages along P(p), p in P_n, on concrete systems.

Convention: on the integer shift f(T^k x) = f(x - k), so the weighted average
A'_m f equals the convolution K_m * f with K_m supported on the points P(p).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyAverage, InvalidInput, InvalidParameter, OutOfRange, ResourceLimit
from .expsums import IntPolynomial
from .normprimes import PnSieve

DIRECT_CAP = 10**8
DENSE_CAP = 1 << 26


class Signal:
    """Finitely supported function Z -> C stored as sorted positions and values."""

    def __init__(self, positions=(), values=()):
        pos = np.asarray(positions, dtype=np.int64).ravel()
        val = np.asarray(values, dtype=np.complex128).ravel()
        if pos.shape != val.shape:
            raise InvalidInput("positions and values differ in length")
        order = np.argsort(pos, kind="stable")
        pos, val = pos[order], val[order]
        uniq, inv = np.unique(pos, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=np.complex128)
        np.add.at(summed, inv, val)
        keep = summed != 0
        self.positions = uniq[keep]
        self.values = summed[keep]

    @classmethod
    def from_dense(cls, offset: int, values) -> "Signal":
        values = np.asarray(values)
        return cls(offset + np.arange(len(values)), values)

    @classmethod
    def delta(cls, x: int = 0, value: complex = 1.0) -> "Signal":
        return cls([x], [value])

    def __call__(self, x):
        """Values at integer points x (0 off the support)."""
        x = np.asarray(x, dtype=np.int64)
        if len(self.positions) == 0:
            return np.zeros(x.shape, dtype=np.complex128)
        i = np.clip(np.searchsorted(self.positions, x), 0, len(self.positions) - 1)
        return np.where(self.positions[i] == x, self.values[i], 0)

    def __getitem__(self, x: int) -> complex:
        return complex(self(np.int64(x)))

    def __len__(self):
        return len(self.positions)

    @property
    def bounds(self) -> tuple[int, int] | None:
        if len(self.positions) == 0:
            return None
        return int(self.positions[0]), int(self.positions[-1])

    @property
    def mass(self) -> complex:
        return complex(np.sum(self.values))

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Values on lo..hi inclusive."""
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        sel = (self.positions >= lo) & (self.positions <= hi)
        out[self.positions[sel] - lo] = self.values[sel]
        return out

    def fourier(self, alpha: float) -> complex:
        """sum_y K(y) e(alpha y)."""
        return complex(np.sum(self.values * np.exp(2j * np.pi * ((alpha * self.positions) % 1.0))))

    def __repr__(self):
        return f"Signal(support={len(self)}, bounds={self.bounds})"


@dataclass(frozen=True)
class ToySystem:
    """Integer shift (T^k x = x - k) or cyclic rotation (T^k x = x - k c mod N)."""
    kind: str = "shift"
    N: int | None = None
    step: int = 1

    def __post_init__(self):
        if self.kind not in ("shift", "cyclic"):
            raise InvalidParameter(f"unknown system {self.kind!r}")
        if self.kind == "cyclic" and (self.N is None or self.N < 1):
            raise InvalidParameter("cyclic system needs N >= 1")

    @classmethod
    def cyclic(cls, N: int, step: int = 1) -> "ToySystem":
        return cls("cyclic", N, step)

    def orbit(self, P: IntPolynomial, ps: np.ndarray, x: int) -> np.ndarray:
        """Points T^{P(p)} x for each p."""
        if self.kind == "cyclic":
            k = P.eval_mod(ps, self.N)
            return (x - k * (self.step % self.N)) % self.N
        vals = [P(int(p)) for p in ps.tolist()]
        if vals and max(abs(v) for v in vals) >= 2 ** 62:
            raise ResourceLimit("P(p) leaves the int64 range")
        return x - np.array(vals, dtype=np.int64)


def _evaluate(f, pts: np.ndarray) -> np.ndarray:
    if isinstance(f, Signal):
        return f(pts)
    if callable(f):
        return np.asarray(f(pts), dtype=np.complex128)
    arr = np.asarray(f, dtype=np.complex128)  # a function on Z/N
    return arr[pts]


def _members(sieve: PnSieve, m: int) -> np.ndarray:
    if m > sieve.limit:
        raise OutOfRange(f"m={m} beyond sieve limit {sieve.limit}")
    return sieve.upto(m)


def kernel(sieve: PnSieve, P: IntPolynomial, m: int) -> Signal:
    """K_m = (1/m) sum over members p <= m of log p at the point P(p)."""
    ps = _members(sieve, m)
    pos = [P(int(p)) for p in ps.tolist()]
    if pos and max(abs(v) for v in pos) >= 2 ** 62:
        raise ResourceLimit("kernel support leaves the int64 range")
    return Signal(pos, np.log(ps.astype(np.float64)) / m)


def ergodic_avg(sieve: PnSieve, P: IntPolynomial, m: int, sys: ToySystem, f, x: int,
                weighted: bool = False) -> complex:
    """A_m f(x) (mean over members p <= m), or A'_m f(x) with weights log p / m."""
    ps = _members(sieve, m)
    vals = _evaluate(f, sys.orbit(P, ps, x)) if len(ps) else np.zeros(0)
    if weighted:
        w = np.log(ps.astype(np.float64))
        return complex(math.fsum((w * vals.real).tolist()), math.fsum((w * vals.imag).tolist())) / m
    if len(ps) == 0:
        raise EmptyAverage(f"no members up to m={m}")
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist())) / len(ps)


def avg_sequence(sieve: PnSieve, P: IntPolynomial, sys: ToySystem, f, x: int, scales,
                 weighted: bool = False) -> np.ndarray:
    """(A_m f(x)) for m in the increasing list of scales."""
    scales = [int(m) for m in scales]
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise InvalidParameter("scales must be increasing")
    return np.array([ergodic_avg(sieve, P, m, sys, f, x, weighted) for m in scales])


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def maximal_fn(sieve: PnSieve, P: IntPolynomial, f: Signal, M: int, method: str = "auto") -> Signal:
    """sup over dyadic m <= M of |K_m * f|, on the integer shift."""
    ps = _members(sieve, M)
    if len(f) == 0 or len(ps) == 0:
        return Signal()
    pos = np.array([P(int(p)) for p in ps.tolist()], dtype=object)
    kmin, kmax = int(min(pos)), int(max(pos))
    flo, fhi = f.bounds
    lo, hi = flo + kmin, fhi + kmax
    if hi - lo + 1 > DENSE_CAP:
        raise ResourceLimit("output span too large for a dense evaluation")
    pos = pos.astype(np.int64)
    logs = np.log(ps.astype(np.float64))
    fd = f.dense(flo, fhi)
    levels = []
    m = 1
    while m <= M:
        levels.append(m)
        m *= 2
    if method == "auto":
        method = "direct" if len(f) * len(ps) <= DIRECT_CAP else "fft"
    best = np.zeros(hi - lo + 1)
    if method == "direct":
        acc = np.zeros(hi - lo + 1, dtype=np.complex128)
        j = 0
        for m in levels:
            while j < len(ps) and ps[j] <= m:
                start = pos[j] + flo - lo
                acc[start:start + len(fd)] += logs[j] * fd
                j += 1
            np.maximum(best, np.abs(acc) / m, out=best)
    else:
        size = _next_pow2(hi - lo + 1)
        Ff = np.fft.fft(fd, size)
        for m in levels:
            k = ps <= m
            if not k.any():
                continue
            kd = np.zeros(kmax - kmin + 1)
            np.add.at(kd, pos[k] - kmin, logs[k])
            conv = np.fft.ifft(Ff * np.fft.fft(kd, size))[: hi - lo + 1]
            np.maximum(best, np.abs(conv) / m, out=best)
    nz = np.nonzero(best > 0)[0]
    return Signal(nz + lo, best[nz])
