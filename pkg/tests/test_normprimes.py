import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from normform.arith import is_prime, primes_upto
from normform.errors import (CacheIntegrityError, NotApplicable, InvalidResidue, OutOfRange,
                             ResourceLimit)
from normform.normprimes import (bounded_search, build_sieve, cornacchia, density_report,
                                 is_member, pn_residue_density, read_cache, residue_form_count,
                                 weighted_count, write_cache)


def brute_members(n, x):
    out = []
    for p in primes_upto(x).tolist():
        if any(math.isqrt(p - n * v * v) ** 2 == p - n * v * v
               for v in range(math.isqrt(p // n) + 1)):
            out.append(p)
    return out


def test_membership_examples():
    ok, (u, v) = is_member(1, 13)
    assert ok and {u, v} == {2, 3}
    assert is_member(5, 7) == (False, None)
    assert is_member(1, 3) == (False, None)
    assert is_member(2, 2)[0] and is_member(2, 3)[0]


@settings(max_examples=200)
@given(st.integers(1, 40), st.integers(2, 10**6))
def test_cornacchia_agrees_with_bounded_search(n, p):
    if not is_prime(p):
        return
    w = cornacchia(n, p) if p > 2 and n % p else None
    b = bounded_search(n, p)
    if w is not None:
        assert w[0] ** 2 + n * w[1] ** 2 == p
        assert b is not None
    ok, wit = is_member(n, p)
    assert ok == (b is not None)
    if ok:
        assert wit[0] ** 2 + n * wit[1] ** 2 == p


def test_sieve_examples(tmp_path):
    assert list(build_sieve(1, 20, cache_dir=tmp_path).members) == [2, 5, 13, 17]
    assert list(build_sieve(2, 20, cache_dir=tmp_path).members) == [2, 3, 11, 17, 19]
    assert len(build_sieve(3, 1, use_cache=False)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 5, 6, 7, 10, 12])
def test_sieve_matches_per_prime_membership(n):
    s = build_sieve(n, 10**5, use_cache=False)
    expected = [p for p in primes_upto(10**5).tolist() if is_member(n, p)[0]]
    assert s.members.tolist() == expected
    assert s.members.tolist()[:200] == brute_members(n, int(s.members[199]))


def test_sieve_segments_are_seamless(monkeypatch):
    import normform.normprimes as npm
    whole = npm.sieve_members(5, 200_000)
    monkeypatch.setattr(npm, "SEGMENT", 4096 + 7)
    assert np.array_equal(npm.sieve_members(5, 200_000), whole)


def test_weighted_count(tmp_path):
    s = build_sieve(1, 20, cache_dir=tmp_path)
    assert weighted_count(s, 20) == pytest.approx(math.log(2 * 5 * 13 * 17), abs=1e-12)
    assert weighted_count(s, 1) == 0
    assert weighted_count(s, 10) <= weighted_count(s, 20)
    with pytest.raises(OutOfRange):
        weighted_count(s, 21)


def test_cache_round_trip_and_corruption(tmp_path):
    s = build_sieve(1, 5000, use_cache=False)
    path = tmp_path / "s.pnsv"
    write_cache(path, s)
    again = read_cache(path)
    assert again.n == 1 and again.limit == 5000
    assert np.array_equal(again.members, s.members)
    data = path.read_bytes()
    (tmp_path / "short.pnsv").write_bytes(data[:-9])
    with pytest.raises(CacheIntegrityError):
        read_cache(tmp_path / "short.pnsv")
    (tmp_path / "magic.pnsv").write_bytes(b"XXXXX" + data[5:])
    with pytest.raises(CacheIntegrityError):
        read_cache(tmp_path / "magic.pnsv")
    flipped = bytearray(data)
    flipped[40] ^= 1
    (tmp_path / "sum.pnsv").write_bytes(bytes(flipped))
    with pytest.raises(CacheIntegrityError):
        read_cache(tmp_path / "sum.pnsv")
    # reordered entries keep the sum but not the checksum
    swapped = bytearray(data)
    a, b = 29, 37
    swapped[a:a + 8], swapped[b:b + 8] = data[b:b + 8], data[a:a + 8]
    (tmp_path / "swap.pnsv").write_bytes(bytes(swapped))
    with pytest.raises(CacheIntegrityError):
        read_cache(tmp_path / "swap.pnsv")


def test_cache_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NORMFORM_CACHE", str(tmp_path))
    build_sieve(2, 300)
    assert (tmp_path / "pn_n2_x300.pnsv").exists()
    assert build_sieve(2, 300).members.tolist() == brute_members(2, 300)


def test_resource_cap():
    with pytest.raises(ResourceLimit):
        build_sieve(1, 10**9)


@pytest.mark.parametrize("n,p,b,count", [(1, 5, 1, 4), (1, 5, 2, 4), (1, 13, 7, 12),
                                         (2, 1009, 5, 1008), (5, 1009, 2, 1008)])
def test_residue_form_count_examples(n, p, b, count):
    assert residue_form_count(n, p, b) == count


def test_residue_form_count_large_p_path_matches_enumeration():
    for n, p in [(1, 101), (2, 193), (5, 409)]:
        for b in range(1, p, 17):
            assert residue_form_count(n, p, b, cutoff=0) == residue_form_count(n, p, b)


def test_residue_errors():
    with pytest.raises(NotApplicable):
        residue_form_count(1, 7, 1)
    with pytest.raises(NotApplicable):
        residue_form_count(5, 5, 1)
    with pytest.raises(InvalidResidue):
        residue_form_count(1, 13, 26)


def test_residue_densities(sieve1):
    assert pn_residue_density(1, 1, 0, 10**6, sieve=sieve1) == 1.0
    d5 = [pn_residue_density(1, 5, b, 10**6, sieve=sieve1) for b in range(1, 5)]
    assert all(abs(d - 0.25) <= 0.1 * 0.25 for d in d5)
    d13 = [pn_residue_density(1, 13, b, 10**6, sieve=sieve1) for b in range(1, 13)]
    assert all(abs(d - 1 / 12) <= 0.15 / 12 for d in d13)
    # classes sum to one except for p | Q
    assert sum(d5) == pytest.approx(1 - 1 / sieve1.count(10**6), abs=1e-12)
    with pytest.raises(NotApplicable):
        pn_residue_density(1, 3, 1, 10**6, sieve=sieve1)


def test_density_report_n1_trend(sieve1):
    _, w3, ref = density_report(1, 10**3, sieve=sieve1)
    _, w7, _ = density_report(1, 10**7, sieve=sieve1)
    assert ref == 0.5
    assert 0.45 <= w7 <= 0.55
    assert abs(w7 - 0.5) < abs(w3 - 0.5)
