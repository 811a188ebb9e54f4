from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from matchdens.cyclotomic import CycValue, cyclotomic_polynomial


def test_known_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def _phi(n):
    out = sum(1 for k in range(1, n + 1) if _gcd(k, n) == 1)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@pytest.mark.parametrize("n", list(range(1, 40)))
def test_cyclotomic_degree_is_phi(n):
    assert len(cyclotomic_polynomial(n)) - 1 == _phi(n)


def test_root_relations():
    z4 = CycValue.root_of_unity(4)
    assert z4 * z4 == -1
    z6 = CycValue.root_of_unity(6)
    assert z6 * z6 == z6 - 1
    # full sum of roots vanishes
    for e in (2, 3, 5, 6, 8, 12):
        total = CycValue.zero()
        for j in range(e):
            total = total + CycValue.root_of_unity(e, j)
        assert total.is_zero()


def test_cross_conductor_equality():
    assert CycValue.root_of_unity(6, 2) == CycValue.root_of_unity(3, 1)
    assert CycValue.root_of_unity(8, 0) == 1
    assert CycValue.root_of_unity(12, 6) == -1
    assert CycValue.root_of_unity(4, 1) != CycValue.root_of_unity(8, 1)


def test_conjugation_inverts_roots():
    for e in (3, 4, 5, 8):
        z = CycValue.root_of_unity(e)
        assert z * z.conjugate() == 1
        assert (z + z.conjugate()).conjugate() == z + z.conjugate()


def test_rationality():
    z5 = CycValue.root_of_unity(5)
    s = sum((CycValue.root_of_unity(5, j) for j in range(1, 5)), CycValue.zero())
    assert s.is_rational() and s.as_rational() == -1
    with pytest.raises(ValueError):
        z5.as_rational()


def test_power_basis_shape():
    v = CycValue(12, {0: Fraction(1), 7: Fraction(2, 3)})
    basis = v.power_basis()
    assert len(basis) == 12
    assert v.canonical() == basis[: len(v.canonical())]


def test_integer_values_embed_with_constant_coefficient_only():
    v = CycValue.from_rational(Fraction(7, 2), conductor=8)
    assert v.power_basis()[0] == Fraction(7, 2)
    assert all(c == 0 for c in v.power_basis()[1:])


_small = st.integers(min_value=-4, max_value=4)


def _values(conductor):
    return st.dictionaries(
        st.integers(min_value=0, max_value=conductor - 1),
        st.fractions(min_value=-3, max_value=3, max_denominator=6),
        max_size=3,
    ).map(lambda d: CycValue(conductor, d))


@given(st.sampled_from([1, 2, 3, 4, 6, 8, 12]).flatmap(
    lambda e: st.tuples(_values(e), _values(e), _values(e))
))
def test_ring_axioms(triple):
    a, b, c = triple
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_sort_key_total_and_stable():
    vals = [CycValue.root_of_unity(6, j) for j in range(6)]
    keys = [v.sort_key(12) for v in vals]
    assert len(set(keys)) == 6
    assert sorted(keys) == sorted(keys, key=tuple)
