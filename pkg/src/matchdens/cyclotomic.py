"""Exact arithmetic in cyclotomic fields.

Values are finite rational combinations of e-th roots of unity, stored as a
sparse exponent -> coefficient map.  Ring operations happen in Q[x]/(x^e - 1)
(exponent arithmetic mod e); equality and zero tests project to the field
Q(zeta_e) by reducing modulo the e-th cyclotomic polynomial, so two different
exponent combinations representing the same field element compare equal.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # exact division of integer polynomials, coefficients low -> high
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[-1]
        out[k] = q
        if q:
            for i, d in enumerate(den):
                num[k + i] -= q * d
    if any(num):
        raise ArithmeticError("non-zero remainder in exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n):
        if d < n:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _phi_degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class CycValue:
    """An element of the e-th cyclotomic field with exact rational coordinates."""

    __slots__ = ("conductor", "_coeffs", "_canonical")

    def __init__(self, conductor: int, coeffs: dict[int, Fraction] | None = None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        cleaned: dict[int, Fraction] = {}
        for j, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                j %= conductor
                cleaned[j] = cleaned.get(j, Fraction(0)) + c
        self._coeffs = {j: c for j, c in cleaned.items() if c}
        self._canonical: tuple[Fraction, ...] | None = None

    # -- constructors

    @classmethod
    def from_rational(cls, value, conductor: int = 1) -> CycValue:
        return cls(conductor, {0: Fraction(value)})

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1) -> CycValue:
        return cls(order, {power % order: Fraction(1)})

    @classmethod
    def zero(cls, conductor: int = 1) -> CycValue:
        return cls(conductor, {})

    # -- canonical form

    def canonical(self) -> tuple[Fraction, ...]:
        """Coordinates in the power basis 1, z, ..., z^(phi(e)-1) after reduction."""
        if self._canonical is None:
            e = self.conductor
            vec = [Fraction(0)] * e
            for j, c in self._coeffs.items():
                vec[j] += c
            phi = cyclotomic_polynomial(e)
            deg = len(phi) - 1
            for k in range(e - 1, deg - 1, -1):
                c = vec[k]
                if c:
                    vec[k] = Fraction(0)
                    for i in range(deg):
                        vec[k - deg + i] -= c * phi[i]
            self._canonical = tuple(vec[:deg])
        return self._canonical

    def power_basis(self) -> tuple[Fraction, ...]:
        """Canonical coordinates padded with zeros to length e."""
        canon = self.canonical()
        return canon + (Fraction(0),) * (self.conductor - len(canon))

    def embed(self, conductor: int) -> CycValue:
        """The same field element viewed inside a larger cyclotomic field."""
        if conductor % self.conductor:
            raise ValueError("new conductor must be a multiple of the old one")
        step = conductor // self.conductor
        return CycValue(conductor, {j * step: c for j, c in self._coeffs.items()})

    # -- predicates

    def is_zero(self) -> bool:
        return not any(self.canonical())

    def is_rational(self) -> bool:
        canon = self.canonical()
        return not any(canon[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        canon = self.canonical()
        return canon[0] if canon else Fraction(0)

    # -- arithmetic

    def _paired(self, other: CycValue) -> tuple[CycValue, CycValue, int]:
        e = lcm(self.conductor, other.conductor)
        return self.embed(e), other.embed(e), e

    def __add__(self, other) -> CycValue:
        other = _coerce(other)
        a, b, e = self._paired(other)
        out = dict(a._coeffs)
        for j, c in b._coeffs.items():
            out[j] = out.get(j, Fraction(0)) + c
        return CycValue(e, out)

    __radd__ = __add__

    def __neg__(self) -> CycValue:
        return CycValue(self.conductor, {j: -c for j, c in self._coeffs.items()})

    def __sub__(self, other) -> CycValue:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> CycValue:
        return _coerce(other) + (-self)

    def __mul__(self, other) -> CycValue:
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycValue(self.conductor, {j: c * q for j, c in self._coeffs.items()})
        other = _coerce(other)
        a, b, e = self._paired(other)
        out: dict[int, Fraction] = {}
        for j1, c1 in a._coeffs.items():
            for j2, c2 in b._coeffs.items():
                k = (j1 + j2) % e
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return CycValue(e, out)

    __rmul__ = __mul__

    def conjugate(self) -> CycValue:
        """Complex conjugate (inverts every root of unity)."""
        e = self.conductor
        return CycValue(e, {(-j) % e: c for j, c in self._coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycValue.from_rational(other)
        if not isinstance(other, CycValue):
            return NotImplemented
        if self.conductor == other.conductor:
            return self.canonical() == other.canonical()
        a, b, _ = self._paired(other)
        return a.canonical() == b.canonical()

    __hash__ = None  # equality crosses conductors; hashing would be a trap

    def sort_key(self, conductor: int) -> tuple[Fraction, ...]:
        """Deterministic comparison key: power basis at a fixed common conductor."""
        return self.embed(conductor).power_basis()

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycValue({self.as_rational()})"
        terms = ", ".join(f"z^{j}: {c}" for j, c in sorted(self._coeffs.items()))
        return f"CycValue(e={self.conductor}, {{{terms}}})"


def _coerce(value) -> CycValue:
    if isinstance(value, CycValue):
        return value
    if isinstance(value, (int, Fraction)):
        return CycValue.from_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a cyclotomic value")
