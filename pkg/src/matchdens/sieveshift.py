"""Shifting a quadratic polynomial away from small primes, and scanning the
shifted polynomial for prime and semiprime values.

Given a primitive irreducible quadratic f and a bound T, the shift picks
A = product of all primes below T and a residue B (by CRT over the primes
below T, least admissible residue at each) so that F(n) = f(An + B) has no
prime factor below T.  A scan then certifies which F(n) are a prime or a
product of exactly two primes; values whose factorization resists the
factoring budget are reported as unresolved, never guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .primes import crt, is_prime, pollard_rho, primes_below, sqrt_mod

MAX_SHIFT_T = 100_000


class NoAdmissibleShiftError(ValueError):
    """Some prime below T divides f(x) for every residue x (only possible at 2)."""


@dataclass(frozen=True)
class QuadPoly:
    """f(x) = a x^2 + b x + c, irreducible over Q, with a != 0.

    Primitivity (content 1) is demanded where it matters, at find_shift and
    almost_prime_scan: the expansion of f(An + B) for an *inadmissible* B is
    legitimately imprimitive, and shifted_poly must still return it exactly.
    """

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("leading coefficient must be non-zero")
        disc = self.discriminant()
        if disc >= 0 and math.isqrt(disc) ** 2 == disc:
            raise ValueError("polynomial is reducible over Q (square discriminant)")

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def __call__(self, n: int) -> int:
        return (self.a * n + self.b) * n + self.c

    def coefficients(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class ShiftSpec:
    """The shift data: modulus A (divisible by every prime < T), residue B in
    [0, A) with f(B) coprime to every prime < T, and the expanded F."""

    T: int
    A: int
    B: int
    poly: QuadPoly  # the shifted polynomial F

    def __post_init__(self):
        for p in primes_below(self.T):
            if self.A % p:
                raise ValueError(f"A must be divisible by every prime < T (missing {p})")
            if self.poly.c % p == 0:
                # F(0) = f(B): the whole point of the shift
                raise ValueError(f"f(B) is divisible by {p} < T")


def primorial_below(T: int) -> int:
    out = 1
    for p in primes_below(T):
        out *= p
    return out


def shifted_poly(f: QuadPoly, A: int, B: int) -> QuadPoly:
    """Exact expansion of f(A n + B)."""
    a, b, c = f.a, f.b, f.c
    return QuadPoly(a * A * A, 2 * a * A * B + b * A, (a * B + b) * B + c)


def find_shift(f: QuadPoly, T: int) -> ShiftSpec:
    """Choose A = primorial of primes < T and the least admissible B by CRT.

    A prime power T! would do the same job; the primorial has every prime < T
    as a factor and keeps the coefficients far smaller.  For each prime l < T
    the least residue with f(b) != 0 (mod l) is selected, so reruns are
    bit-identical.  Raises NoAdmissibleShiftError when f hits 0 on every
    residue mod some l (for a quadratic this can only happen at l = 2).
    """
    if T < 3:
        raise ValueError("T must be at least 3")
    if T > MAX_SHIFT_T:
        raise ValueError(f"T is bounded at {MAX_SHIFT_T}")
    if not f.is_primitive():
        raise ValueError("find_shift needs a primitive polynomial")
    primes = primes_below(T)
    residues = []
    for ell in primes:
        b_ell = next((b for b in range(ell) if f(b) % ell), None)
        if b_ell is None:
            raise NoAdmissibleShiftError(
                f"f takes only multiples of {ell}; no admissible shift exists"
            )
        residues.append(b_ell)
    if primes:
        B, A = crt(residues, primes)
    else:
        B, A = 0, 1
    for ell in primes:
        if f(B) % ell == 0:
            raise AssertionError(f"CRT shift failed: {ell} divides f({B})")
    return ShiftSpec(T=T, A=A, B=B, poly=shifted_poly(f, A, B))


def has_factor_below(value: int, bound: int) -> bool:
    """Trial division check used by the shift invariants."""
    value = abs(value)
    for p in primes_below(bound):
        if value % p == 0:
            return True
    return False


@dataclass(frozen=True)
class AlmostPrimeHit:
    """n with F(n) a prime or a product of exactly two primes (verified)."""

    n: int
    value: int
    factors: tuple[int, ...]

    def __post_init__(self):
        if len(self.factors) not in (1, 2):
            raise ValueError("a hit has one or two prime factors")
        prod = 1
        for p in self.factors:
            prod *= p
            if not is_prime(p):
                raise ValueError(f"recorded factor {p} is not prime")
        if prod != self.value:
            raise ValueError("recorded factors do not multiply back to the value")


@dataclass
class ScanResult:
    """Hits plus the values the factoring budget could not classify."""

    poly: QuadPoly
    n_max: int
    hits: list[AlmostPrimeHit] = field(default_factory=list)
    unresolved: list[tuple[int, int]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.hits)

    def __len__(self):
        return len(self.hits)


def _quad_roots_mod(F: QuadPoly, ell: int) -> list[int]:
    """Roots of F mod ell (brute force for tiny ell, formula otherwise)."""
    if ell <= 64:
        return [r for r in range(ell) if F(r) % ell == 0]
    a, b, c = F.a % ell, F.b % ell, F.c % ell
    if a == 0:
        if b == 0:
            return []  # c != 0 mod ell since F is primitive
        return [(-c) * pow(b, -1, ell) % ell]
    disc = (b * b - 4 * a * c) % ell
    s = sqrt_mod(disc, ell)
    if s is None:
        return []
    inv2a = pow(2 * a, -1, ell)
    roots = {(-b + s) * inv2a % ell, (-b - s) * inv2a % ell}
    return sorted(roots)


def almost_prime_scan(
    F: QuadPoly,
    n_max: int,
    *,
    trial_bound: int = 1_000_000,
    rho_iterations: int = 1 << 14,
) -> ScanResult:
    """All n in [1, n_max] where F(n) is prime or a product of two primes.

    Small prime factors are found by sieving the roots of F modulo each prime
    below trial_bound (an arithmetic-progression sieve, so the per-prime cost
    is n_max/l rather than n_max); cofactors are settled by a primality test
    and a bounded Pollard rho.  Every hit carries its verified factorization.
    """
    if F.a <= 0:
        raise ValueError("scan needs a positive leading coefficient")
    if not F.is_primitive():
        raise ValueError("scan needs a primitive polynomial")
    if n_max < 1:
        return ScanResult(poly=F, n_max=n_max)
    small_factors: list[list[int]] = [[] for _ in range(n_max + 1)]
    for ell in primes_below(trial_bound + 1):
        for r in _quad_roots_mod(F, ell):
            start = r if r >= 1 else r + ell
            for n in range(start, n_max + 1, ell):
                small_factors[n].append(ell)

    result = ScanResult(poly=F, n_max=n_max)
    for n in range(1, n_max + 1):
        value = F(n)
        if value < 2:
            continue
        factors: list[int] = []
        m = value
        for ell in small_factors[n]:
            if m % ell:
                raise AssertionError(f"sieve marked {ell} but it does not divide F({n})")
            while m % ell == 0:
                factors.append(ell)
                m //= ell
        if m == 1:
            if len(factors) in (1, 2):
                result.hits.append(AlmostPrimeHit(n, value, tuple(factors)))
            continue
        if len(factors) >= 2:
            continue  # at least three prime factors in total
        if is_prime(m):
            result.hits.append(AlmostPrimeHit(n, value, tuple(sorted([*factors, m]))))
            continue
        if factors:
            continue  # small prime + composite cofactor: three or more primes
        d = pollard_rho(m, rho_iterations)
        if d is None:
            result.unresolved.append((n, value))
            continue
        p1, p2 = d, m // d
        if is_prime(p1) and is_prime(p2):
            result.hits.append(AlmostPrimeHit(n, value, tuple(sorted([p1, p2]))))
        # else: the rho factor is composite, so the value has >= 3 prime factors
    return result


def pairwise_coprime(ns: list[int]) -> bool:
    """True iff every pair of the given positive integers has gcd 1."""
    if not ns:
        raise ValueError("need a non-empty list")
    if any(n < 1 for n in ns):
        raise ValueError("entries must be positive")
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            if math.gcd(ns[i], ns[j]) != 1:
                return False
    return True
