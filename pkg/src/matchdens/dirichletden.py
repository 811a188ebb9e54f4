"""Dirichlet characters with exact values, and density estimation over primes.

Characters mod N are indexed by exponent tuples against a fixed generator
decomposition of (Z/N)*; values are stored as exponents of a root of unity,
never as floats, so equality of values is integer arithmetic.  Matching
densities of pairs are exact rationals with denominator dividing phi(N).

The empirical side works on indicator (or weighted) series over the primes up
to some x_max: a natural-density estimate with a binomial standard error, a
truncated Dirichlet-series estimate along a schedule of s values, and the
finite form of the weighted-sum inequality that bounds the lower density of a
set of places from below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from .primes import sieve_primes

DEFAULT_S_SCHEDULE = (1.5, 1.2, 1.1, 1.05, 1.02)
DEFAULT_X_MAX = 10**6
MAX_MODULUS = 10**4


def _factorize_small(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _local_generators(p: int, k: int) -> list[tuple[int, int]]:
    """Generators (with orders) of (Z/p^k)*."""
    pk = p**k
    if p == 2:
        if k == 1:
            return []
        if k == 2:
            return [(3, 2)]
        return [(pk - 1, 2), (5, 2 ** (k - 2))]
    phi = pk // p * (p - 1)
    prime_factors = [q for q, _ in _factorize_small(phi)]
    for g in range(2, pk):
        if g % p == 0:
            continue
        if all(pow(g, phi // q, pk) != 1 for q in prime_factors):
            return [(g, phi)]
    raise ArithmeticError(f"no generator found for (Z/{pk})*")


@dataclass(frozen=True)
class UnitGroup:
    """(Z/N)* presented as a product of cyclic groups with explicit generators."""

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    dlog: dict  # unit residue -> exponent tuple

    @property
    def order(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def units(self) -> list[int]:
        return sorted(self.dlog)


@lru_cache(maxsize=64)
def unit_group(N: int) -> UnitGroup:
    if not 1 <= N <= MAX_MODULUS:
        raise ValueError(f"modulus must be in [1, {MAX_MODULUS}]")
    gens: list[int] = []
    orders: list[int] = []
    for p, k in _factorize_small(N):
        pk = p**k
        rest = N // pk
        for g, order in _local_generators(p, k):
            # lift: = g mod p^k, = 1 mod N/p^k
            if rest == 1:
                lifted = g % N
            else:
                inv = pow(pk, -1, rest)
                lifted = (g + pk * ((1 - g) * inv % rest)) % N
            gens.append(lifted)
            orders.append(order)
    dlog: dict[int, tuple[int, ...]] = {}
    exps = [0] * len(gens)
    while True:
        residue = 1 % N
        for g, e in zip(gens, exps):
            residue = residue * pow(g, e, N) % N
        dlog[residue] = tuple(exps)
        for i in range(len(exps)):
            exps[i] += 1
            if exps[i] < orders[i]:
                break
            exps[i] = 0
        else:
            break
        if not gens:
            break
    expected = _euler_phi(N)
    if len(dlog) != expected:
        raise ArithmeticError(f"generator enumeration found {len(dlog)} of {expected} units")
    return UnitGroup(modulus=N, generators=tuple(gens), orders=tuple(orders), dlog=dlog)


def _euler_phi(N: int) -> int:
    out = N
    for p, _ in _factorize_small(N):
        out = out // p * (p - 1)
    return out


@dataclass(frozen=True)
class DirichletChar:
    """A character of (Z/N)*, as exponents against the group's generators."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        group = unit_group(self.modulus)
        if len(self.exponents) != len(group.orders):
            raise ValueError("one exponent per generator is required")
        object.__setattr__(
            self,
            "exponents",
            tuple(t % o for t, o in zip(self.exponents, group.orders)),
        )

    @property
    def group(self) -> UnitGroup:
        return unit_group(self.modulus)

    @property
    def order(self) -> int:
        out = 1
        for t, o in zip(self.exponents, self.group.orders):
            if t:
                out = lcm(out, o // gcd(o, t))
        return out

    def is_principal(self) -> bool:
        return all(t == 0 for t in self.exponents)

    def value_exponent(self, a: int) -> int | None:
        """Exponent j with chi(a) = zeta_order^j, or None when gcd(a, N) > 1."""
        group = self.group
        a %= self.modulus
        if a not in group.dlog:
            return None
        e0 = 1
        for o in group.orders:
            e0 = lcm(e0, o)
        acc = 0
        for t, o, d in zip(self.exponents, group.orders, group.dlog[a]):
            acc = (acc + t * d * (e0 // o)) % e0
        e = self.order
        return acc * e // e0  # exact: acc is a multiple of e0/e

    def mul(self, other: DirichletChar) -> DirichletChar:
        if other.modulus != self.modulus:
            raise ValueError("characters must share a modulus")
        return DirichletChar(
            self.modulus,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    def inverse(self) -> DirichletChar:
        return DirichletChar(self.modulus, tuple(-t for t in self.exponents))


def dirichlet_characters(N: int) -> list[DirichletChar]:
    """All characters mod N in mixed-radix index order."""
    group = unit_group(N)
    out = []
    for idx in range(group.order):
        out.append(dirichlet_character(N, idx))
    return out


def dirichlet_character(N: int, index: int) -> DirichletChar:
    """Character by mixed-radix index over the generator orders.

    index = t_0 + t_1 * o_0 + t_2 * o_0 * o_1 + ... (the documented convention).
    """
    group = unit_group(N)
    if not 0 <= index < group.order:
        raise ValueError(f"character index must be in [0, {group.order})")
    exps = []
    for o in group.orders:
        exps.append(index % o)
        index //= o
    return DirichletChar(N, tuple(exps))


def character_index(chi: DirichletChar) -> int:
    group = chi.group
    idx, scale = 0, 1
    for t, o in zip(chi.exponents, group.orders):
        idx += t * scale
        scale *= o
    return idx


def check_multiplicative(chi: DirichletChar) -> bool:
    """Exhaustive multiplicativity check over (Z/N)* (N is small by module bound)."""
    units = chi.group.units()
    e = chi.order
    for a in units:
        va = chi.value_exponent(a)
        for b in units:
            if (va + chi.value_exponent(b)) % e != chi.value_exponent(a * b % chi.modulus):
                return False
    return True


def exact_matching_density_dirichlet(x: DirichletChar, y: DirichletChar) -> Fraction:
    """Exact density of units where the two characters take the same value.

    Characters on different moduli are induced to the lcm; the denominator of
    the result divides phi of that common modulus.
    """
    L = lcm(x.modulus, y.modulus)
    if L > MAX_MODULUS:
        raise ValueError("common modulus exceeds the supported range")
    group = unit_group(L)
    ex, ey = x.order, y.order
    E = lcm(ex, ey)
    count = 0
    for a in group.dlog:
        vx = x.value_exponent(a % x.modulus)
        vy = y.value_exponent(a % y.modulus)
        if vx is None or vy is None:
            continue  # cannot happen: a is a unit mod L
        if vx * (E // ex) % E == vy * (E // ey) % E:
            count += 1
    return Fraction(count, group.order)


# -- prime series and estimators


@dataclass
class PrimeIndicatorSeries:
    """Indicator (and optional weight) data on the primes up to x_max."""

    x_max: int
    primes: np.ndarray
    marked: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        if len(self.primes) != len(self.marked):
            raise ValueError("one indicator per prime is required")
        if self.weights is not None and len(self.weights) != len(self.primes):
            raise ValueError("one weight per prime is required")


def series_from_predicate(x_max: int, predicate) -> PrimeIndicatorSeries:
    primes = sieve_primes(x_max)
    marked = np.fromiter((bool(predicate(int(q))) for q in primes), dtype=bool, count=len(primes))
    return PrimeIndicatorSeries(x_max=x_max, primes=primes, marked=marked)


def matching_prime_series(
    x: DirichletChar, y: DirichletChar, x_max: int
) -> PrimeIndicatorSeries:
    """Indicator of chi1(q) = chi2(q) over primes q coprime to both moduli."""
    L = lcm(x.modulus, y.modulus)
    table = _match_table(x, y, L)
    primes = sieve_primes(x_max)
    keep = np.array([gcd(int(q) % L, L) == 1 for q in primes], dtype=bool) if L > 1 else np.ones(len(primes), bool)
    primes = primes[keep]
    marked = table[primes % L] if L > 1 else np.ones(len(primes), bool)
    return PrimeIndicatorSeries(x_max=x_max, primes=primes, marked=marked)


def _match_table(x: DirichletChar, y: DirichletChar, L: int) -> np.ndarray:
    ex, ey = x.order, y.order
    E = lcm(ex, ey)
    table = np.zeros(max(L, 1), dtype=bool)
    for a in unit_group(L).dlog:
        vx = x.value_exponent(a % x.modulus)
        vy = y.value_exponent(a % y.modulus)
        table[a] = vx * (E // ex) % E == vy * (E // ey) % E
    return table


def difference_weight_series(
    x: DirichletChar, y: DirichletChar, x_max: int
) -> PrimeIndicatorSeries:
    """|chi1(q) - chi2(q)|^2 weights (exact where the cosine is rational)."""
    L = lcm(x.modulus, y.modulus)
    ex, ey = x.order, y.order
    E = lcm(ex, ey)
    wtable = np.zeros(max(L, 1), dtype=np.float64)
    for a in unit_group(L).dlog:
        vx = x.value_exponent(a % x.modulus) * (E // ex) % E
        vy = y.value_exponent(a % y.modulus) * (E // ey) % E
        wtable[a] = _root_distance_sq((vx - vy) % E, E)
    primes = sieve_primes(x_max)
    keep = np.array([gcd(int(q) % L, L) == 1 for q in primes], dtype=bool) if L > 1 else np.ones(len(primes), bool)
    primes = primes[keep]
    weights = wtable[primes % L] if L > 1 else np.zeros(len(primes))
    return PrimeIndicatorSeries(
        x_max=x_max, primes=primes, marked=weights > 0, weights=weights
    )


_EXACT_COSINES = {
    Fraction(0, 1): 0.0,
    Fraction(1, 2): 4.0,
    Fraction(1, 4): 2.0,
    Fraction(3, 4): 2.0,
    Fraction(1, 3): 3.0,
    Fraction(2, 3): 3.0,
    Fraction(1, 6): 1.0,
    Fraction(5, 6): 1.0,
}


def _root_distance_sq(d: int, E: int) -> float:
    frac = Fraction(d % E, E)
    if frac in _EXACT_COSINES:
        return _EXACT_COSINES[frac]
    return 2.0 - 2.0 * math.cos(2.0 * math.pi * d / E)


@dataclass(frozen=True)
class DensityEstimate:
    estimate: float
    stderr: float
    marked: int
    total: int


def natural_density_estimate(series: PrimeIndicatorSeries) -> DensityEstimate:
    """Marked fraction of the primes in range, with a binomial standard error."""
    n = len(series.primes)
    if n < 100:
        raise ValueError("need at least 100 primes in range")
    marked = int(np.count_nonzero(series.marked))
    f = marked / n
    return DensityEstimate(
        estimate=f, stderr=math.sqrt(max(f * (1 - f), 1e-300) / n), marked=marked, total=n
    )


def dirichlet_density_estimate(
    series: PrimeIndicatorSeries, s_values=DEFAULT_S_SCHEDULE
) -> list[tuple[float, float]]:
    """Truncated partial-sum ratios sum_marked q^-s / sum q^-s per s.

    The s -> 1+ limit is not taken (that needs the full tail); these values
    carry an explicit truncation caveat and are only expected to drift toward
    the true density as s decreases.
    """
    s_list = list(s_values)
    if any(not 1 < s <= 2 for s in s_list):
        raise ValueError("s values must lie in (1, 2]")
    if any(b >= a for a, b in zip(s_list, s_list[1:])):
        raise ValueError("s values must be strictly decreasing")
    q = series.primes.astype(np.float64)
    out = []
    for s in s_list:
        terms = q**(-s)
        out.append((s, float(terms[series.marked].sum() / terms.sum())))
    return out


@dataclass(frozen=True)
class DiagnosticResult:
    s: float
    dimension: int
    per_sample_bound: float
    weighted_sum: float
    marked_sum: float
    total_sum: float
    inequality_holds: bool
    implied_lower_bound: float
    marked_partial_ratio: float


def lower_density_diagnostic(
    series: PrimeIndicatorSeries, n: int, s: float
) -> DiagnosticResult:
    """Truncated form of: weighted sum / (2n)^2 <= partial sum over the marked set.

    Weights must obey the per-sample bound (2n)^2 (the tempered-eigenvalue
    bound); any violation is a precondition failure, not a data point.  The
    implied lower bound weighted/( (2n)^2 * total ) is a truncation-level
    stand-in for the lower-density inequality.
    """
    if series.weights is None:
        raise ValueError("diagnostic needs a weighted series")
    if not 1 < s < 2:
        raise ValueError("s must lie in (1, 2)")
    bound = float((2 * n) ** 2)
    worst = float(series.weights.max()) if len(series.weights) else 0.0
    if worst > bound + 1e-9:
        raise ValueError(
            f"weight {worst} exceeds the per-sample bound {bound}: non-tempered input"
        )
    q = series.primes.astype(np.float64)
    terms = q**(-s)
    weighted = float((series.weights * terms).sum())
    marked = float(terms[series.marked].sum())
    total = float(terms.sum())
    holds = weighted / bound <= marked * (1 + 1e-12) + 1e-300
    return DiagnosticResult(
        s=s,
        dimension=n,
        per_sample_bound=bound,
        weighted_sum=weighted,
        marked_sum=marked,
        total_sum=total,
        inequality_holds=holds,
        implied_lower_bound=weighted / (bound * total) if total else 0.0,
        marked_partial_ratio=marked / total if total else 0.0,
    )
