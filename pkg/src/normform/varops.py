"""Variation, oscillation and jump-counting operators on finite sequences.

Sequences are indexed from 1 in the public API, matching index lists such as
the oscillation times I and the long-scale set A. All suprema over infinite
families become maxima over the finite window.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, InvalidParameter, PreconditionViolated

SLACK = 1e-9


def _values(seq) -> np.ndarray:
    f = np.asarray(seq, dtype=np.complex128).ravel()
    if f.size == 0:
        raise InvalidInput("sequence must be nonempty")
    return f


def v_variation(seq, r: float) -> float:
    """r-variation: max over increasing index chains of (sum |f_{n_i} - f_{n_{i-1}}|**r)**(1/r)."""
    if r < 1:
        raise InvalidParameter("r must be at least 1")
    f = _values(seq)
    best = np.zeros(len(f))
    for i in range(1, len(f)):
        best[i] = np.max(best[:i] + np.abs(f[i] - f[:i]) ** r)
    return float(best.max()) ** (1.0 / r)


def _check_times(I, L: int, strict: bool = True) -> list[int]:
    I = [int(i) for i in I]
    if not I:
        raise InvalidParameter("index list must be nonempty")
    steps = np.diff(I)
    if (strict and np.any(steps <= 0)) or np.any(steps < 0):
        raise InvalidParameter("index list must be increasing")
    if I[0] < 1 or I[-1] > L:
        raise InvalidParameter(f"indices must lie in 1..{L}")
    return I


def _osc(f: np.ndarray, I: list[int], closed: bool = False) -> float:
    total = 0.0
    for lo, hi in zip(I[:-1], I[1:]):
        stop = hi if closed else hi - 1  # 1-based inclusive end of the block
        if stop >= lo:
            total += float(np.max(np.abs(f[lo - 1:stop] - f[lo - 1]))) ** 2
    return math.sqrt(total)


def oscillation(seq, I, closed: bool = False) -> float:
    """(sum_{j < M} max_{i in [I_j, I_{j+1})} |f_i - f_{I_j}|**2)**(1/2).

    There is one block per consecutive pair of times, so a single time gives 0.
    ``closed=True`` uses [I_j, I_{j+1}] instead.
    """
    f = _values(seq)
    return _osc(f, _check_times(I, len(f)), closed)


def jump_count(seq, lam: float) -> int:
    """Longest chain n_0 < ... < n_J with every |f_{n_i} - f_{n_{i-1}}| > lam (exact DP)."""
    if lam <= 0:
        raise InvalidParameter("lambda must be positive")
    f = _values(seq)
    chain = np.zeros(len(f), dtype=np.int64)
    for i in range(1, len(f)):
        ok = np.abs(f[i] - f[:i]) > lam
        if ok.any():
            chain[i] = chain[:i][ok].max() + 1
    return int(chain.max())


def jump_count_greedy(seq, lam: float) -> int:
    """Single left-to-right scan that counts a jump and re-anchors whenever the gap exceeds lam.

    This is a lower bound for jump_count and can be strictly smaller,
    e.g. [0, 1.1, 2.0, 0.95] with lam = 1 gives 1 against 2.
    """
    if lam <= 0:
        raise InvalidParameter("lambda must be positive")
    f = _values(seq)
    count, anchor = 0, f[0]
    for x in f[1:]:
        if abs(x - anchor) > lam:
            count += 1
            anchor = x
    return count


def jump_count_disjoint(seq, lam: float) -> int:
    """Most disjoint pairs s_1 < t_1 <= s_2 < t_2 <= ... with |f_t - f_s| > lam.

    Interval scheduling: repeatedly take the admissible pair with the earliest end.
    """
    if lam <= 0:
        raise InvalidParameter("lambda must be positive")
    f = _values(seq)
    L = len(f)
    # earliest end for pairs starting at s
    end = np.full(L, L, dtype=np.int64)
    for s in range(L - 1):
        hit = np.nonzero(np.abs(f[s + 1:] - f[s]) > lam)[0]
        if hit.size:
            end[s] = s + 1 + hit[0]
    # suffix minimum: earliest end among starts >= b
    best = np.minimum.accumulate(end[::-1])[::-1]
    count, b = 0, 0
    while b < L and best[b] < L:
        count += 1
        b = int(best[b])
    return count


@dataclass(frozen=True)
class OpSpec:
    """One member of the operator family: variation, oscillation or jump."""
    kind: str
    r: float | None = None
    I: tuple[int, ...] | None = None
    lam: float | None = None

    def __post_init__(self):
        if self.kind == "variation":
            if self.r is None or self.r < 2:
                raise InvalidParameter("variation needs r >= 2")
        elif self.kind == "oscillation":
            if not self.I:
                raise InvalidParameter("oscillation needs index list I")
        elif self.kind == "jump":
            if self.lam is None or self.lam <= 0:
                raise InvalidParameter("jump needs lambda > 0")
        else:
            raise InvalidParameter(f"unknown operator kind {self.kind!r}")

    @property
    def r_factor(self) -> float:
        if self.kind != "variation":
            return 1.0
        return math.inf if self.r == 2 else self.r / (self.r - 2)

    def __call__(self, seq) -> float:
        if self.kind == "variation":
            return v_variation(seq, self.r)
        if self.kind == "oscillation":
            return oscillation(seq, self.I)
        return self.lam * math.sqrt(jump_count(seq, self.lam))


@dataclass
class Report:
    """Tally of pointwise inequalities lhs <= rhs, violated beyond SLACK."""
    entries: dict = field(default_factory=dict)

    def check(self, name: str, lhs: float, rhs: float) -> bool:
        e = self.entries.setdefault(name, {"name": name, "checked": 0, "violations": 0,
                                           "max_slack": -math.inf})
        e["checked"] += 1
        lhs, rhs = float(lhs), float(rhs)
        gap = lhs - rhs
        e["max_slack"] = max(e["max_slack"], gap)
        bad = gap > SLACK * (1.0 + abs(rhs))
        if bad:
            e["violations"] += 1
        return not bad

    def merge(self, other: "Report") -> "Report":
        for name, e in other.entries.items():
            mine = self.entries.setdefault(name, {"name": name, "checked": 0, "violations": 0,
                                                  "max_slack": -math.inf})
            mine["checked"] += e["checked"]
            mine["violations"] += e["violations"]
            mine["max_slack"] = max(mine["max_slack"], e["max_slack"])
        return self

    @property
    def violations(self) -> int:
        return sum(e["violations"] for e in self.entries.values())

    def as_list(self) -> list[dict]:
        out = []
        for e in self.entries.values():
            e = dict(e)
            if not math.isfinite(e["max_slack"]):
                e["max_slack"] = None
            out.append(e)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps({"violations": self.violations, "checks": self.as_list()}, **kw)


def rademacher_menshov_bound(seq) -> float:
    """sqrt(2) * sum_i (sum_j |f_{2^i (j+1)} - f_{2^i j}|**2)**(1/2), 0-based, in-range terms."""
    f = _values(seq)
    L = len(f)
    m = L.bit_length() - 1
    if L != 1 << m:
        raise PreconditionViolated("Rademacher-Menshov needs length 2**m")
    total = 0.0
    for i in range(m):
        step = 1 << i
        d = f[step::step] - f[:-step:step][: len(f[step::step])]
        total += math.sqrt(float(np.sum(np.abs(d) ** 2)))
    return math.sqrt(2) * total


def inequality_suite(seq, specs=(), other=None, report: Report | None = None) -> Report:
    """Check domination by the 2-variation, subadditivity and the dyadic bound.

    ``other`` is a second sequence of the same length used for the triangle
    type inequalities.
    """
    rep = report if report is not None else Report()
    f = _values(seq)
    v2 = v_variation(f, 2)
    for spec in specs:
        val = spec(f)
        if spec.kind == "variation":
            rep.check("variation_le_v2", val, v2)
        elif spec.kind == "oscillation":
            rep.check("oscillation_le_v2", val, v2)
        else:
            rep.check("jump_le_v2", val, v2)
        if other is not None:
            g = _values(other)
            if spec.kind == "jump":
                lam = spec.lam
                rhs = (lam * math.sqrt(jump_count(f, lam / 2))
                       + lam * math.sqrt(jump_count(g, lam / 2)))
                rep.check("jump_quasi_triangle", spec(f + g), rhs)
            else:
                rep.check(f"{spec.kind}_subadditive", spec(f + g), spec(f) + spec(g))
    L = len(f)
    if L >= 2 and L & (L - 1) == 0:
        rep.check("rademacher_menshov", v2, rademacher_menshov_bound(f))
    return rep


# long/short splitting

def _check_scales(A, L: int) -> list[int]:
    A = _check_times(A, L)
    if A[0] != 1:
        raise InvalidParameter("long scales must start at index 1")
    return A


def short_variation(seq, A, r: float) -> float:
    """(sum over blocks [A_n, A_{n+1}) of V^r(block)**r)**(1/r); the last block runs to L."""
    f = _values(seq)
    A = _check_scales(A, len(f))
    ends = A[1:] + [len(f) + 1]
    total = sum(v_variation(f[a - 1:b - 1], r) ** r for a, b in zip(A, ends))
    return total ** (1.0 / r)


def long_variation(seq, A, r: float) -> float:
    f = _values(seq)
    A = _check_scales(A, len(f))
    return v_variation(f[np.array(A) - 1], r)


def long_jump_count(seq, A, lam: float) -> int:
    f = _values(seq)
    A = _check_scales(A, len(f))
    return jump_count_disjoint(f[np.array(A) - 1], lam)


def long_oscillation(seq, A, I) -> float:
    """Oscillation along A with times J_j = max{A_i <= I_j}."""
    f = _values(seq)
    A = _check_scales(A, len(f))
    I = _check_times(I, len(f))
    Aa = np.array(A)
    J = [int(Aa[np.searchsorted(Aa, i, side="right") - 1]) for i in I]
    total = 0.0
    for lo, hi in zip(J[:-1], J[1:]):
        block = Aa[(Aa >= lo) & (Aa < hi)]
        if block.size:
            total += float(np.max(np.abs(f[block - 1] - f[lo - 1]))) ** 2
    return math.sqrt(total)


def long_short_split(seq, A, r: float, lam: float, I, report: Report | None = None) -> dict:
    """Long and short parts along A, with the four splitting inequalities checked."""
    rep = report if report is not None else Report()
    f = _values(seq)
    vs2 = short_variation(f, A, 2)
    parts = {
        "v_long": long_variation(f, A, r),
        "v_short": short_variation(f, A, r),
        "v2_short": vs2,
        "jump_long": long_jump_count(f, A, lam / 3),
        "osc_long": long_oscillation(f, A, I),
    }
    V = v_variation(f, r)
    jump = lam * math.sqrt(jump_count(f, lam))
    osc = oscillation(f, I)
    jump_long = lam * math.sqrt(parts["jump_long"])
    rep.check("split_variation", V, parts["v_long"] + 2 * parts["v_short"])
    rep.check("split_jump", jump, 9 * (vs2 + jump_long))
    rep.check("split_oscillation", osc, 5 * (vs2 + parts["osc_long"]))
    rep.check("split_merged_variation", V, 27 * (vs2 + parts["v_long"]))
    rep.check("split_merged_jump", jump, 27 * (vs2 + jump_long / 3))
    rep.check("split_merged_oscillation", osc, 27 * (vs2 + parts["osc_long"]))
    parts["report"] = rep
    return parts


# weight transference

def normalized_averages(w, a) -> np.ndarray:
    """(sum_{n <= N} w_n a_n) / (sum_{n <= N} w_n) for each N."""
    w = np.asarray(w, dtype=np.float64)
    return np.cumsum(w * np.asarray(a, dtype=np.complex128)) / np.cumsum(w)


def transfer_coefficients(w, w_prime) -> np.ndarray:
    """lam[k-1, n-1] with avg'_k = sum_n lam[k, n] avg_n (partial summation)."""
    w = np.asarray(w, dtype=np.float64)
    wp = np.asarray(w_prime, dtype=np.float64)
    ratio = wp / w
    W, Wp = np.cumsum(w), np.cumsum(wp)
    L = len(w)
    lam = np.zeros((L, L))
    diffs = W[:-1] * (ratio[:-1] - ratio[1:])
    for k in range(L):
        lam[k, :k] = diffs[:k] / Wp[k]
        lam[k, k] = W[k] * ratio[k] / Wp[k]
    return lam


def _monotone(x: np.ndarray, sign: int) -> bool:
    d = np.diff(x) * sign
    return bool(np.all(d >= -1e-15 * np.maximum(1.0, np.abs(x[1:]))))


def _step_integral(coef: np.ndarray, values: np.ndarray) -> complex:
    """integral over [0, total) of values[N(t)] with N(t) = min{N : coef[:N+1].sum() > t}."""
    cum = np.cumsum(coef)
    edges = np.unique(np.concatenate([[0.0], cum]))
    edges = edges[edges <= cum[-1]]
    mids = 0.5 * (edges[1:] + edges[:-1])
    idx = np.searchsorted(cum, mids, side="right")
    return complex(np.sum(np.diff(edges) * values[idx]))


def _pieces(coef_rows: np.ndarray):
    """Split [0, total) into pieces where every row's N(t) is constant.

    Returns (lengths, index tuples) with one index tuple (0-based) per piece.
    """
    cums = np.cumsum(coef_rows, axis=1)
    total = cums[0, -1]
    edges = np.unique(np.concatenate([[0.0], cums.ravel()]))
    edges = edges[edges <= total]
    mids = 0.5 * (edges[1:] + edges[:-1])
    idx = np.stack([np.searchsorted(c, mids, side="right") for c in cums])
    idx = np.minimum(idx, coef_rows.shape[1] - 1)
    return np.diff(edges), idx.T


def _osc_indices(f: np.ndarray, idx, closed: bool) -> float:
    total = 0.0
    for lo, hi in zip(idx[:-1], idx[1:]):
        stop = hi + 1 if closed else hi
        if stop > lo:
            total += float(np.max(np.abs(f[lo:stop] - f[lo]))) ** 2
    return math.sqrt(total)


def _jump_transfer_bound(f: np.ndarray, lam: float, mass: float) -> float:
    """sum_j lam * 3**(j/2) * N_{2^j lam / (10 mass)}(f)**(1/2), until the count vanishes."""
    total, j = 0.0, 0
    while True:
        n = jump_count(f, 2 ** j * lam / (10 * mass))
        if n == 0:
            return total
        total += lam * 3 ** (j / 2) * math.sqrt(n)
        j += 1


def weight_transfer(w, w_prime, a, r: float = 3.0, lam: float | None = None, I=None,
                    closed: bool = True, report: Report | None = None) -> dict:
    """Express the w'-averages of a through the w-averages and check the transfer bounds.

    With ratio = w'/w decreasing the coefficients are nonnegative with unit row
    sums. With ratio increasing, avg' = 2C avg - sum(tilde lam * avg), where
    C = max_k lam[k, k] and the tilde coefficients are nonnegative with row sums 2C - 1.

    The oscillation bound averages oscillations of the w-averages along the
    index paths N_{i_j}(t). A path can reach N_{i_{j+1}}(t) inside block j, so
    ``closed=True`` (default) takes closed blocks on those paths; ``closed=False``
    uses half-open blocks, which can fail by a boundary term.
    """
    rep = report if report is not None else Report()
    w = np.asarray(w, dtype=np.float64)
    wp = np.asarray(w_prime, dtype=np.float64)
    a = np.asarray(a, dtype=np.complex128)
    if w.shape != wp.shape or w.shape != a.shape or w.ndim != 1:
        raise InvalidInput("w, w_prime and a must be 1-d of equal length")
    if np.any(w <= 0) or np.any(wp <= 0):
        raise PreconditionViolated("weights must be positive")
    ratio = wp / w
    if _monotone(ratio, -1):
        case = "decreasing"
    elif _monotone(ratio, +1):
        case = "increasing"
    else:
        raise PreconditionViolated("w'/w is neither decreasing nor increasing")
    L = len(w)
    avg = normalized_averages(w, a)
    avg_p = normalized_averages(wp, a)
    lam_mat = transfer_coefficients(w, wp)
    rep.check("transfer_partial_summation", float(np.max(np.abs(lam_mat @ avg - avg_p))), 0.0)
    if case == "decreasing":
        coef, C, mass = lam_mat, None, 1.0
        direct = avg_p
    else:
        C = float(np.max(np.diag(lam_mat)))
        coef = -lam_mat
        coef[np.arange(L), np.arange(L)] = 2 * C - np.diag(lam_mat)
        mass = 2 * C - 1
        direct = 2 * C * avg - avg_p  # = sum_n coef[k, n] avg_n
    if np.any(coef < -1e-12):
        raise PreconditionViolated("transfer coefficients are not nonnegative")
    coef = np.maximum(coef, 0.0)
    sums = coef.sum(axis=1)
    rep.check("transfer_mass_constant", float(np.max(np.abs(sums - mass))), 0.0)
    # prefix sums over n must decrease in k
    prefix = np.cumsum(coef, axis=1)
    rise = float(np.max(np.diff(prefix, axis=0), initial=0.0))
    rep.check("transfer_prefix_decreasing", rise, 0.0)
    residual = max(abs(_step_integral(coef[k], avg) - direct[k]) for k in range(L))
    rep.check("transfer_integral_identity", residual, 0.0)

    # operator inequalities
    rng_I = I if I is not None else list(range(1, L + 1, max(1, L // 6)))
    I0 = [i - 1 for i in _check_times(rng_I, L)]
    lengths, idx = _pieces(coef[I0])
    osc_rhs = float(np.dot(lengths, [_osc_indices(avg, t, closed) for t in idx]))
    osc_p = _osc(avg_p, [i + 1 for i in I0])
    V, Vp = v_variation(avg, r), v_variation(avg_p, r)
    diam = float(np.max(np.abs(avg_p - avg_p[0])))
    lam = lam if lam is not None else max(diam / 3, 1e-12)
    jump_p = lam * math.sqrt(jump_count(avg_p, lam))
    if case == "decreasing":
        rep.check("transfer_variation", Vp, mass * V)
        rep.check("transfer_oscillation", osc_p, osc_rhs)
        rep.check("transfer_jump", jump_p, _jump_transfer_bound(avg, lam, mass))
        constant = mass
    else:
        rep.check("transfer_variation", Vp, (4 * C - 1) * V)
        osc_main = _osc(avg, [i + 1 for i in I0])
        rep.check("transfer_oscillation", osc_p, 2 * C * osc_main + osc_rhs)
        jump_rhs = (lam * math.sqrt(jump_count(avg, lam / (4 * C)))
                    + _jump_transfer_bound(avg, lam / 2, mass) * 2)
        rep.check("transfer_jump", jump_p, jump_rhs)
        constant = 4 * C - 1
    return {"case": case, "C": C, "mass": mass, "variation_constant": constant,
            "identity_residual": residual, "coefficients": coef, "report": rep}


def _random_sequence(rng: np.random.Generator, L: int) -> np.ndarray:
    style = rng.integers(4)
    if style == 0:
        f = rng.normal(size=L) + 1j * rng.normal(size=L)
    elif style == 1:
        f = np.cumsum(rng.normal(size=L))
    elif style == 2:
        f = rng.integers(-3, 4, size=L).astype(float)  # many ties
    else:
        f = np.cumsum(rng.normal(size=L)) / np.arange(1, L + 1) + 0.1j * rng.normal(size=L)
    return f.astype(np.complex128)


def random_corpus_report(seed: int = 0, count: int = 1000, max_len: int = 128,
                         transfer_every: int = 3, transfer_closed: bool = True) -> Report:
    """Run every pointwise inequality over a reproducible random corpus."""
    rng = np.random.default_rng(seed)
    rep = Report()
    for it in range(count):
        L = int(rng.integers(1, max_len + 1))
        if it % 4 == 0:
            L = 1 << int(rng.integers(0, max_len.bit_length()))  # dyadic lengths for the dyadic bound
        L = min(L, max_len)
        f = _random_sequence(rng, L)
        g = _random_sequence(rng, L)
        scale = float(np.max(np.abs(f - f[0]), initial=0.0)) or 1.0
        lam = float(rng.uniform(0.05, 1.0)) * scale
        I = sorted(set(rng.integers(1, L + 1, size=int(rng.integers(1, 8))).tolist()))
        specs = [OpSpec("variation", r=float(r)) for r in (2.5, 3.0, 4.0)]
        specs += [OpSpec("oscillation", I=tuple(I)), OpSpec("jump", lam=lam)]
        inequality_suite(f, specs, g, rep)
        A = sorted(set([1] + rng.integers(1, L + 1, size=int(rng.integers(0, 10))).tolist()))
        long_short_split(f, A, 2.5, lam, I, rep)
        if it % transfer_every == 0:
            w = rng.uniform(0.5, 2.0, size=L)
            pick = it % 3
            if pick == 0:
                wp = w * np.sort(rng.uniform(0.1, 3.0, size=L))[::-1]
            elif pick == 1:
                wp = w * np.sort(rng.uniform(0.1, 3.0, size=L))
            else:
                w, wp = np.ones(L), np.log(np.arange(2, L + 2))
            a = rng.normal(size=L) + 1j * rng.normal(size=L)
            weight_transfer(w, wp, a, r=2.5, I=I if len(I) > 1 else None,
                            closed=transfer_closed, report=rep)
    return rep
