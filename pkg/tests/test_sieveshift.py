import math

import pytest
from hypothesis import given, strategies as st

from matchdens.sieveshift import (
    AlmostPrimeHit,
    NoAdmissibleShiftError,
    QuadPoly,
    almost_prime_scan,
    find_shift,
    has_factor_below,
    pairwise_coprime,
    primorial_below,
    shifted_poly,
)


def test_quadpoly_validation():
    with pytest.raises(ValueError):
        QuadPoly(0, 1, 1)
    with pytest.raises(ValueError):
        QuadPoly(1, 0, -1)  # (x-1)(x+1)
    with pytest.raises(ValueError):
        QuadPoly(1, 0, 0)  # x^2
    f = QuadPoly(1, 0, 1)
    assert f(2) == 5 and f.discriminant() == -4 and f.is_primitive()
    assert not QuadPoly(2, 2, 4).is_primitive()


def test_find_shift_examples():
    f = QuadPoly(1, 0, 1)
    s5 = find_shift(f, 5)
    assert (s5.A, s5.B) == (6, 0)
    assert s5.poly.coefficients() == (36, 0, 1)
    s3 = find_shift(f, 3)
    assert (s3.A, s3.B) == (2, 0)
    with pytest.raises(NoAdmissibleShiftError):
        find_shift(QuadPoly(1, 1, 2), 3)  # even at every integer
    with pytest.raises(ValueError):
        find_shift(QuadPoly(2, 2, 4), 5)  # imprimitive input


def test_find_shift_least_residue_convention():
    # f = x^2 + 3: minimal admissible residues are 0 mod 2 and 1 mod 3
    s = find_shift(QuadPoly(1, 0, 3), 5)
    assert (s.A, s.B) == (6, 4)
    assert math.gcd(s.poly(0), 6) == 1


def test_find_shift_deterministic():
    f = QuadPoly(3, 1, 7)
    s1, s2 = find_shift(f, 20), find_shift(f, 20)
    assert (s1.A, s1.B) == (s2.A, s2.B)
    assert s1.A == primorial_below(20)


def test_shifted_poly_expansion():
    f = QuadPoly(1, 3, 5)
    exp = shifted_poly(f, 6, 1)
    assert exp.coefficients() == (36, 30, 9)
    assert all(exp(n) == f(6 * n + 1) for n in range(-3, 4))
    assert not exp.is_primitive()  # why find_shift checks f(B), not just B
    ident = shifted_poly(f, 1, 0)
    assert ident.coefficients() == f.coefficients()


def test_shift_clears_small_factors():
    for T in (10, 30):
        s = find_shift(QuadPoly(1, 0, 1), T)
        for n in range(1, 301):
            assert not has_factor_below(s.poly(n), T)


def test_scan_first_hits():
    f36 = shifted_poly(QuadPoly(1, 0, 1), 6, 0)
    scan = almost_prime_scan(f36, 40, trial_bound=10_000)
    assert (scan.hits[0].n, scan.hits[0].value, scan.hits[0].factors) == (1, 37, (37,))
    assert (scan.hits[1].n, scan.hits[1].value, scan.hits[1].factors) == (2, 145, (5, 29))
    for h in scan.hits:
        assert math.prod(h.factors) == h.value


def test_scan_rejects_reducible():
    with pytest.raises(ValueError):
        QuadPoly(1, 0, 0)  # n^2 is rejected at the type level
    neg = QuadPoly(-1, 0, -1)
    with pytest.raises(ValueError):
        almost_prime_scan(neg, 10)


def test_scan_counts_multiplicity():
    # 36 n^2 + 1 at n=24: 20737 = 89 * 233; semiprime with distinct factors
    f36 = shifted_poly(QuadPoly(1, 0, 1), 6, 0)
    scan = almost_prime_scan(f36, 24, trial_bound=1000)
    by_n = {h.n: h for h in scan.hits}
    assert by_n[24].factors == (89, 233)
    # squares of primes also count: factors with multiplicity
    sq_scan = almost_prime_scan(QuadPoly(1, 1, 41), 50, trial_bound=10)
    squares = [h for h in sq_scan.hits if len(h.factors) == 2 and h.factors[0] == h.factors[1]]
    assert squares and all(h.factors[0] ** 2 == h.value for h in squares)


def test_hit_self_verification():
    with pytest.raises(ValueError):
        AlmostPrimeHit(n=1, value=35, factors=(5, 9))
    with pytest.raises(ValueError):
        AlmostPrimeHit(n=1, value=30, factors=(2, 3, 5))
    AlmostPrimeHit(n=1, value=35, factors=(5, 7))


def test_pairwise_coprime():
    assert pairwise_coprime([11, 37, 389])
    assert pairwise_coprime([6, 35, 143])
    assert not pairwise_coprime([10, 15])
    with pytest.raises(ValueError):
        pairwise_coprime([])
    with pytest.raises(ValueError):
        pairwise_coprime([0, 3])


@given(st.lists(st.integers(min_value=1, max_value=300), min_size=1, max_size=6))
def test_pairwise_coprime_matches_bruteforce(ns):
    brute = all(
        math.gcd(ns[i], ns[j]) == 1
        for i in range(len(ns))
        for j in range(i + 1, len(ns))
    )
    assert pairwise_coprime(ns) is brute


def test_primorial():
    assert primorial_below(10) == 2 * 3 * 5 * 7
    assert primorial_below(3) == 2
