from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from matchdens import catalog, groupcore
from matchdens.chartable import character_table_small, integer_valued_two_dimensional
from matchdens.cyclotomic import CycValue
from matchdens.groupcore import (
    ClassFunction,
    FiniteGroup,
    GroupMismatchError,
    InvalidGroupError,
    abelianization,
    commutator_subgroup,
    direct_product,
    fiber_product,
    is_nilpotent,
    matching_fraction,
    matching_fraction_bruteforce,
    pullback,
    quotient_by,
    zero_fraction,
)


@lru_cache(maxsize=None)
def _group(name):
    return catalog.named_group(name)


@lru_cache(maxsize=None)
def _sl2_integer_char():
    sl2 = _group("sl2f3")
    return sl2, integer_valued_two_dimensional(character_table_small(sl2))


@pytest.mark.parametrize(
    "name,order,classes",
    [
        ("trivial", 1, 1),
        ("cyclic:6", 6, 6),
        ("q8", 8, 5),
        ("s3", 6, 3),
        ("d4", 8, 5),
        ("sl2f3", 24, 7),
        ("gl2fp:3", 48, 8),
        ("heisenberg:3", 27, 11),
    ],
)
def test_named_groups_validate(name, order, classes):
    g = _group(name)
    g.validate()
    assert g.order == order
    assert len(g.conjugacy_classes()) == classes


def test_sl2f3_class_sizes():
    part = _group("sl2f3").conjugacy_classes()
    assert sorted(part.sizes) == [1, 1, 4, 4, 4, 4, 6]
    assert sum(part.sizes) == 24


def test_classes_closed_under_conjugation():
    for name in ("s3", "q8", "sl2f3"):
        g = _group(name)
        part = g.conjugacy_classes()
        for members in part.classes:
            mset = set(members)
            for x in members:
                for t in range(g.order):
                    assert g.mul(g.mul(t, x), g.inv(t)) in mset


def test_invalid_group_reported():
    half_identity = FiniteGroup(range(5), lambda a, b: (a - b) % 5)
    with pytest.raises(InvalidGroupError):
        half_identity.conjugacy_classes()  # 0 is only a right identity
    no_inverse = FiniteGroup(range(4), lambda a, b: (a * b) % 4)
    with pytest.raises(InvalidGroupError):
        no_inverse.conjugacy_classes()  # 0 absorbs: not a group
    broken = FiniteGroup(range(6), lambda a, b: min(a + b, 5))
    with pytest.raises(InvalidGroupError):
        broken.conjugacy_classes()


def test_direct_product_orders_and_classes():
    sl2 = _group("sl2f3")
    triv = _group("trivial")
    p0 = direct_product(sl2, triv)
    assert p0.order == sl2.order
    prod = direct_product(sl2, sl2)
    assert prod.order == 576
    assert len(prod.conjugacy_classes()) == 49


def test_product_classes_match_generic_orbit_search():
    c6, s3 = _group("cyclic:6"), _group("s3")
    prod = direct_product(c6, s3)
    generic = FiniteGroup(prod.elements, prod._op, inverse=None)
    assert prod.conjugacy_classes().classes == generic.conjugacy_classes().classes


def test_quotients_and_fiber_products():
    sl2 = _group("sl2f3")
    assert len(commutator_subgroup(sl2)) == 8
    q = abelianization(sl2)
    assert q.target.order == 3
    fib = fiber_product(sl2, sl2, q, q)
    assert fib.order == 24 * 24 // 3 == 192
    qa4 = quotient_by(sl2, sl2.center_indices())
    assert qa4.target.order == 12
    assert fiber_product(sl2, sl2, qa4, qa4).order == 48
    # trivial target: the full direct product
    qt = quotient_by(sl2, range(sl2.order))
    assert fiber_product(sl2, sl2, qt, qt).order == 576


def test_fiber_product_rejects_mismatched_targets():
    sl2 = _group("sl2f3")
    q1 = abelianization(sl2)
    q2 = abelianization(sl2)
    with pytest.raises(GroupMismatchError):
        fiber_product(sl2, sl2, q1, q2)  # equal but distinct target objects


def test_quotient_map_rejects_non_surjective():
    c6 = _group("cyclic:6")
    c3 = catalog.cyclic_group(3)
    with pytest.raises(InvalidGroupError):
        groupcore.QuotientMap(source=c6, target=c3, mapping=tuple([0] * 6))


def test_matching_fraction_headline_values():
    sl2, chi = _sl2_integer_char()
    q = abelianization(sl2)
    fib = fiber_product(sl2, sl2, q, q)
    left = pullback(chi, fib, lambda pair: pair[0])
    right = pullback(chi, fib, lambda pair: pair[1])
    assert matching_fraction(left, right) == Fraction(17, 32)
    assert matching_fraction_bruteforce(left, right) == Fraction(17, 32)

    prod = direct_product(sl2, sl2)
    lp = pullback(chi, prod, lambda pair: pair[0])
    rp = pullback(chi, prod, lambda pair: pair[1])
    assert matching_fraction(lp, rp) == Fraction(83, 288)
    assert matching_fraction_bruteforce(lp, rp) == Fraction(83, 288)


def test_zero_fraction_examples():
    sl2, chi = _sl2_integer_char()
    assert zero_fraction(chi) == Fraction(1, 4)
    ones = ClassFunction(sl2, [1] * len(sl2.conjugacy_classes()))
    assert zero_fraction(ones) == 0
    assert matching_fraction(chi, chi) == 1


def test_matching_fraction_group_mismatch():
    sl2, chi = _sl2_integer_char()
    q8 = _group("q8")
    other = ClassFunction(q8, [1] * len(q8.conjugacy_classes()))
    with pytest.raises(GroupMismatchError):
        matching_fraction(chi, other)


_q8_values = st.lists(st.integers(min_value=-2, max_value=2), min_size=5, max_size=5)


@settings(max_examples=60, deadline=None)
@given(_q8_values, _q8_values)
def test_matching_fraction_properties(vals_x, vals_y):
    q8 = _group("q8")
    x = ClassFunction(q8, vals_x)
    y = ClassFunction(q8, vals_y)
    mf = matching_fraction(x, y)
    assert matching_fraction(y, x) == mf
    assert 0 <= mf <= 1
    assert (mf == 1) == (all(a == b for a, b in zip(x.values, y.values)))
    assert mf >= zero_fraction(x) + zero_fraction(y) - 1
    assert mf == matching_fraction_bruteforce(x, y)


@pytest.mark.parametrize(
    "name,expected",
    [
        ("cyclic:6", True),
        ("q8", True),
        ("d4", True),
        ("heisenberg:3", True),
        ("s3", False),
        ("sl2f3", False),
        ("gl2fp:3", False),
    ],
)
def test_is_nilpotent(name, expected):
    assert is_nilpotent(_group(name)) is expected


def test_nilpotency_of_products():
    assert is_nilpotent(direct_product(_group("q8"), _group("cyclic:6")))
    assert not is_nilpotent(direct_product(_group("q8"), _group("s3")))


def test_serialization_round_trip():
    sl2, chi = _sl2_integer_char()
    doc = groupcore.class_function_to_json(chi)
    text = groupcore.dumps(doc)
    assert '"num"' in text and '"den"' in text
    back = groupcore.class_function_from_json(sl2, doc)
    assert all(a == b for a, b in zip(back.values, chi.values))
    gdoc = groupcore.group_to_json(sl2)
    assert gdoc["order"] == 24 and len(gdoc["classes"]) == 7
    assert sum(c["size"] for c in gdoc["classes"]) == 24


def test_class_function_needs_full_coverage():
    q8 = _group("q8")
    with pytest.raises(ValueError):
        ClassFunction(q8, [1, 2, 3])


def test_pullback_along_quotient():
    sl2, _ = _sl2_integer_char()
    q = abelianization(sl2)
    c3 = q.target
    table = character_table_small(c3)
    nontrivial = next(cf for cf in table if not all(v == 1 for v in cf.values))
    lifted = pullback(
        nontrivial, sl2, lambda h: c3.element(q.mapping[sl2.index_of(h)])
    )
    # a lifted character is constant on cosets of the kernel
    assert zero_fraction(lifted) == 0
    assert matching_fraction(lifted, lifted) == 1


def test_cyc_value_round_trip_json():
    v = CycValue(12, {1: Fraction(1, 2), 7: Fraction(-2, 3)})
    doc = groupcore.cyc_value_to_json(v)
    assert groupcore.cyc_value_from_json(doc) == v
