"""Prime sieving, deterministic primality testing, and integer factorization helpers."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# Deterministic Miller-Rabin witness sets.  The first twelve primes certify
# every n < 3.317e24 (Sorenson-Webster); beyond that we fall back to the first
# forty primes, which is no longer a proof but leaves no realistic doubt.
_MR_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_ROUNDS_LARGE = 40


@lru_cache(maxsize=8)
def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (simple numpy Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return np.nonzero(mask)[0].astype(np.int64)


def primes_below(bound: int) -> list[int]:
    """Primes strictly below bound, as plain ints."""
    if bound <= 2:
        return []
    ps = sieve_primes(bound - 1)
    return [int(p) for p in ps]


@lru_cache(maxsize=2)
def _first_primes(count: int) -> tuple[int, ...]:
    limit = max(100, int(count * (math.log(count) + math.log(math.log(count + 2)) + 2)))
    ps = sieve_primes(limit)
    while len(ps) < count:
        limit *= 2
        ps = sieve_primes(limit)
    return tuple(int(p) for p in ps[:count])


def is_prime(n: int) -> bool:
    """Primality test: trial division by tiny primes, then Miller-Rabin.

    Deterministic for n < 3.317e24; for larger n uses a fixed 40-prime witness
    list (reproducible, overwhelmingly reliable, not a certificate).
    """
    if n < 2:
        return False
    for p in _MR_WITNESSES_64:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    witnesses = _MR_WITNESSES_64 if n < _DETERMINISTIC_LIMIT else _first_primes(_MR_ROUNDS_LARGE)
    for a in witnesses:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than n (n >= 0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < 2:
        return 2
    candidate = n + 1
    if candidate % 2 == 0:
        if candidate == 2:
            return 2
        candidate += 1
    while not is_prime(candidate):
        candidate += 2
    return candidate


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo prime p (Tonelli-Shanks), or None if a is a non-residue."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine x = r1 (mod m1), x = r2 (mod m2) for coprime moduli.

    Returns the least non-negative solution together with m1*m2.
    """
    g, s, _ = _ext_gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    m = m1 * m2
    x = (r1 + (r2 - r1) * s % m2 * m1) % m
    return x, m


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    """Least non-negative x with x = r_i (mod m_i) for pairwise coprime moduli."""
    if not residues or len(residues) != len(moduli):
        raise ValueError("need matching non-empty residue/modulus lists")
    x, m = residues[0] % moduli[0], moduli[0]
    for r, mod in zip(residues[1:], moduli[1:]):
        x, m = crt_pair(x, m, r, mod)
    return x, m


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def pollard_rho(n: int, max_iterations: int = 1 << 18) -> int | None:
    """Brent-cycle Pollard rho: a non-trivial factor of composite n, or None.

    Fully deterministic: the polynomial offset c walks 1, 2, 3, ... so reruns
    are bit-identical.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 20):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        count = 0
        while g == 1 and count < max_iterations:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                count += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        if count >= max_iterations:
            return None
    return None


def factorize(
    n: int,
    trial_bound: int = 100_000,
    rho_iterations: int = 1 << 14,
) -> tuple[dict[int, int], int]:
    """Factor n into primes below trial_bound plus rho-discovered factors.

    Returns (factors, unresolved) where factors maps prime -> multiplicity and
    unresolved is a leftover composite cofactor (1 when fully factored).
    Values whose remaining cofactor resists the rho budget are surfaced in
    unresolved rather than guessed at.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    factors: dict[int, int] = {}
    for p in primes_below(trial_bound + 1):
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n == 1:
        return factors, 1
    stack = [n]
    unresolved = 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = pollard_rho(m, rho_iterations)
        if d is None:
            unresolved *= m
            continue
        stack.append(d)
        stack.append(m // d)
    return factors, unresolved
