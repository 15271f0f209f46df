"""Constants attached to the imaginary quadratic field Q(sqrt(-n)).

The ring of integers has integral basis {1, w} where w satisfies
``w**2 = t*w - mu`` with ``(t, mu) = (1, (1+a)/4)`` when the squarefree part
``a`` of ``n`` is 3 mod 4 and ``(0, a)`` otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import squarefree_decomposition
from .errors import ArithmeticOverflow, InvalidDiscriminant, InvalidInput

import numpy as np

_INT64_MAX = np.iinfo(np.int64).max


def class_number(disc: int) -> int:
    """Number of reduced primitive binary quadratic forms of discriminant ``disc``.

    A form (A, B, C) with B**2 - 4AC = disc is reduced when |B| <= A <= C,
    with B >= 0 whenever |B| == A or A == C.
    """
    disc = int(disc)
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidDiscriminant(f"not a negative discriminant: {disc}")
    D = -disc
    h = 0
    A = 1
    while 3 * A * A <= D:
        for B in range(-A + 1, A + 1):
            if (B - disc) % 2:
                continue
            num = B * B + D
            if num % (4 * A):
                continue
            C = num // (4 * A)
            if C < A:
                continue
            if B < 0 and (A == C):
                continue
            if math.gcd(math.gcd(A, abs(B)), C) != 1:
                continue
            h += 1
        A += 1
    return h


@dataclass(frozen=True)
class QuadField:
    n: int
    a: int = field(init=False)
    b: int = field(init=False)
    n0: int = field(init=False)
    omega_trace: int = field(init=False)
    omega_norm: int = field(init=False)
    disc: int = field(init=False)
    class_number: int = field(init=False)
    Rn: int = field(init=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidInput(f"n must be a positive integer, got {n!r}")
        a, b = squarefree_decomposition(int(n))
        if a % 4 == 3:
            n0, t, mu, disc = 2 * b, 1, (1 + a) // 4, -a
        else:
            n0, t, mu, disc = b, 0, a, -4 * a
        h = class_number(disc)
        for name, value in (("n", int(n)), ("a", a), ("b", b), ("n0", n0),
                            ("omega_trace", t), ("omega_norm", mu),
                            ("disc", disc), ("class_number", h), ("Rn", 2 * h)):
            object.__setattr__(self, name, value)

    def norm(self, u: int, v: int) -> int:
        return norm_form(self, u, v)


def build_field(n: int) -> QuadField:
    return QuadField(n)


def norm_form(F: QuadField, u, v):
    """N(u + v*w) = u**2 + t*u*v + mu*v**2.

    Python integers are exact; integer numpy arrays are evaluated in int64 and
    rejected if any value could exceed the int64 range.
    """
    if isinstance(u, (int, np.integer)) and isinstance(v, (int, np.integer)):
        u, v = int(u), int(v)
        return u * u + F.omega_trace * u * v + F.omega_norm * v * v
    u = np.asarray(u)
    v = np.asarray(v)
    if u.dtype.kind not in "iu" or v.dtype.kind not in "iu":
        raise InvalidInput("norm_form expects integer inputs")
    bound = max(int(np.abs(u).max(initial=0)), int(np.abs(v).max(initial=0)))
    if (2 + F.omega_norm) * bound * bound > _INT64_MAX:
        raise ArithmeticOverflow("norm_form would overflow int64")
    u = u.astype(np.int64)
    v = v.astype(np.int64)
    return u * u + F.omega_trace * u * v + F.omega_norm * v * v
