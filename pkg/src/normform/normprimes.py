"""Primes of the form u**2 + n*v**2: membership, sieving, counting, residues."""
from __future__ import annotations

import math
import os
import struct
import tempfile
import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .arith import is_prime, is_square, kronecker, primes_upto, segmented_primes, sqrt_mod_all, factorize
from .errors import (CacheIntegrityError, InvalidInput, InvalidResidue, NotApplicable,
                     OutOfRange, ResourceLimit)
from .quadfield import build_field

MAX_LIMIT = 10**8
SEGMENT = 1 << 23
MAGIC = b"PNSV2"
_HEADER = struct.Struct("<5sQQQ")


def default_cache_dir() -> Path:
    return Path(os.environ.get("NORMFORM_CACHE", "./cache"))


def bounded_search(n: int, p: int) -> tuple[int, int] | None:
    """Witness (u, v), u, v >= 0, of p = u**2 + n*v**2 by scanning v."""
    v = 0
    while n * v * v <= p:
        r = p - n * v * v
        u = math.isqrt(r)
        if u * u == r:
            return u, v
        v += 1
    return None


def cornacchia(n: int, p: int) -> tuple[int, int] | None:
    """Cornacchia's algorithm for u**2 + n*v**2 = p, p an odd prime not dividing n."""
    roots = sqrt_mod_all(-n, p)
    if not roots:
        return None
    r0 = max(roots)  # p/2 < r0 < p
    a, b = p, r0
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    rest = p - b * b
    if rest % n:
        return None
    v2 = rest // n
    if not is_square(v2):
        return None
    return b, math.isqrt(v2)


def is_member(n: int, p: int) -> tuple[bool, tuple[int, int] | None]:
    """Whether the prime p equals u**2 + n*v**2 for some integers u, v."""
    if not is_prime(int(p)):
        raise InvalidInput(f"{p} is not prime")
    n, p = int(n), int(p)
    if p > 2 and n % p and kronecker(-n, p) == 1:
        w = cornacchia(n, p)
        if w is not None:
            return True, w
    w = bounded_search(n, p)
    return (w is not None), w


def _represented_mask(n: int, lo: int, hi: int) -> np.ndarray:
    """mask[i] is True iff lo + i = u**2 + n*v**2 for some u, v >= 0."""
    mask = np.zeros(hi - lo, dtype=bool)
    v = 0
    while n * v * v < hi:
        base = n * v * v
        u_lo = 0 if base >= lo else math.isqrt(lo - base - 1) + 1
        u_hi = math.isqrt(hi - 1 - base)
        if u_hi >= u_lo:
            u = np.arange(u_lo, u_hi + 1, dtype=np.int64)
            mask[u * u + (base - lo)] = True
        v += 1
    return mask


@dataclass(frozen=True)
class PnSieve:
    n: int
    limit: int
    members: np.ndarray = field(repr=False)
    weighted: np.ndarray = field(repr=False)  # weighted[i] = sum of log p over members[:i+1]

    @classmethod
    def from_members(cls, n: int, limit: int, members: np.ndarray) -> "PnSieve":
        members = np.ascontiguousarray(members, dtype=np.int64)
        logs = np.log(members.astype(np.longdouble))
        weighted = np.cumsum(logs).astype(np.float64)
        members.setflags(write=False)
        weighted.setflags(write=False)
        return cls(int(n), int(limit), members, weighted)

    def __len__(self):
        return len(self.members)

    def upto(self, x: int) -> np.ndarray:
        self._check(x)
        return self.members[: np.searchsorted(self.members, x, side="right")]

    def count(self, x: int) -> int:
        self._check(x)
        return int(np.searchsorted(self.members, x, side="right"))

    def weighted_count(self, x: int) -> float:
        return weighted_count(self, x)

    def _check(self, x):
        if x > self.limit:
            raise OutOfRange(f"x={x} beyond sieve limit {self.limit}")


def sieve_members(n: int, x: int) -> np.ndarray:
    """Sorted primes p <= x of the form u**2 + n*v**2 (segmented)."""
    base = primes_upto(math.isqrt(x) + 1)
    parts = []
    for lo in range(0, x + 1, SEGMENT):
        hi = min(lo + SEGMENT, x + 1)
        primes = segmented_primes(lo, hi, base)
        if len(primes):
            rep = _represented_mask(n, lo, hi)
            parts.append(primes[rep[primes - lo]])
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def build_sieve(n: int, x: int, cache_dir=None, use_cache: bool = True,
                max_limit: int = MAX_LIMIT) -> PnSieve:
    """Sieve the primes of the form u**2 + n*v**2 up to x, with a disk cache."""
    n, x = int(n), int(x)
    if n < 1 or x < 1:
        raise InvalidInput("n and x must be positive")
    if x > max_limit:
        raise ResourceLimit(f"x={x} exceeds sieve cap {max_limit}")
    path = None
    if use_cache:
        path = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        path = path / f"pn_n{n}_x{x}.pnsv"
        if path.exists():
            return read_cache(path)
    sieve = PnSieve.from_members(n, x, sieve_members(n, x))
    if path is not None:
        write_cache(path, sieve)
    return sieve


def write_cache(path, sieve: PnSieve) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    members = sieve.members.astype("<u8")
    header = _HEADER.pack(MAGIC, sieve.n, sieve.limit, len(members))
    body = members.tobytes()
    checksum = zlib.crc32(body, zlib.crc32(header))
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(body)
            fh.write(struct.pack("<Q", checksum))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_cache(path) -> PnSieve:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + 8:
        raise CacheIntegrityError(f"{path}: truncated header")
    magic, n, limit, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheIntegrityError(f"{path}: bad magic {magic!r}")
    if len(data) != _HEADER.size + 8 * count + 8:
        raise CacheIntegrityError(f"{path}: length does not match count={count}")
    members = np.frombuffer(data, dtype="<u8", count=count, offset=_HEADER.size)
    (checksum,) = struct.unpack_from("<Q", data, _HEADER.size + 8 * count)
    if zlib.crc32(data[:_HEADER.size + 8 * count]) != checksum:
        raise CacheIntegrityError(f"{path}: checksum mismatch")
    return PnSieve.from_members(n, limit, members.astype(np.int64))


def weighted_count(sieve: PnSieve, x: int) -> float:
    """Sum of log p over members p <= x, correctly rounded (math.fsum)."""
    ps = sieve.upto(x)
    return math.fsum(np.log(ps.astype(np.float64)).tolist())


def density_report(n: int, x: int, sieve: PnSieve | None = None, **kw):
    """(unweighted density, weighted density, 1/(2h) reference) at scale x."""
    if x < 10**3:
        raise InvalidInput("density_report needs x >= 1000")
    if sieve is None or sieve.limit < x or sieve.n != n:
        sieve = build_sieve(n, x, **kw)
    F = build_field(n)
    unweighted = sieve.count(x) * math.log(x) / x
    weighted = weighted_count(sieve, x) / x
    return unweighted, weighted, 1.0 / (2 * F.class_number)


def _check_split_prime(n: int, p: int) -> None:
    if p == 2 or not is_prime(p):
        raise NotApplicable(f"{p} is not an odd prime")
    if n % p == 0 or kronecker(-n, p) != 1:
        raise NotApplicable(f"-{n} is not a nonzero square mod {p}")


@lru_cache(maxsize=512)
def _form_histogram(n: int, p: int) -> np.ndarray:
    """Counts of x**2 + n*y**2 mod p over all (x, y) mod p."""
    xs = np.arange(p, dtype=np.int64)
    sq = xs * xs % p
    vals = (sq[:, None] + (n % p) * sq[None, :]) % p
    return np.bincount(vals.ravel(), minlength=p)


def residue_form_count(n: int, p: int, b: int, cutoff: int = 500) -> int:
    """#{(x, y) mod p : x**2 + n*y**2 = b (mod p), coprime to p}."""
    n, p = int(n), int(p)
    _check_split_prime(n, p)
    if math.gcd(b, p) != 1:
        raise InvalidResidue(f"b={b} is not a unit mod {p}")
    b %= p
    if p <= cutoff:
        return int(_form_histogram(n, p)[b])
    # -n = w**2: (x - w y)(x + w y) = b; count s = x - w y over units, t = b/s
    w = sqrt_mod_all(-n, p)[0]
    inv2 = pow(2, -1, p)
    inv2w = pow(2 * w, -1, p)
    count = 0
    for s in range(1, p):
        t = b * pow(s, -1, p) % p
        x = (s + t) * inv2 % p
        y = (t - s) * inv2w % p
        if (x * x + n * y * y) % p == b:
            count += 1
    return count


def pn_residue_density(n: int, Q: int, b: int, x: int, sieve: PnSieve | None = None, **kw) -> float:
    """Share of members p <= x of the form u**2 + n*v**2 with p = b (mod Q)."""
    if Q < 1:
        raise InvalidInput("Q must be positive")
    if x < 10**4:
        raise InvalidInput("pn_residue_density needs x >= 10**4")
    for p, _ in (factorize(Q) if Q > 1 else ()):
        _check_split_prime(n, p)
    if math.gcd(b, Q) != 1:
        raise InvalidResidue(f"b={b} is not a unit mod {Q}")
    if sieve is None or sieve.limit < x or sieve.n != n:
        sieve = build_sieve(n, x, **kw)
    ps = sieve.upto(x)
    if len(ps) == 0:
        return 0.0
    return float(np.count_nonzero(ps % Q == b % Q)) / len(ps)
