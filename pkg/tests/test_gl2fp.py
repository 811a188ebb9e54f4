from fractions import Fraction

import pytest

from matchdens import catalog, gl2fp, groupcore
from matchdens.gl2fp import (
    CENTRAL,
    NONSEMISIMPLE,
    NONSPLIT,
    SPLIT,
    GL2Element,
    class_inventory,
    class_type_fractions,
    classify,
    enumerate_gl2,
    gl2_order,
    product_character,
    steinberg_character_data,
    steinberg_value_by_fixed_points,
    steinberg_value_of_matrix,
)


def test_element_validation():
    with pytest.raises(ValueError):
        GL2Element(5, 1, 2, 2, 4)  # determinant 0
    with pytest.raises(ValueError):
        GL2Element(6, 1, 0, 0, 1)  # composite p
    m = GL2Element(5, 6, -1, 0, 1)
    assert m.entries() == (1, 4, 0, 1)


def test_classify_examples():
    assert classify(GL2Element(5, 1, 0, 0, 1)) == gl2fp.ClassType(CENTRAL, (1,))
    assert classify(GL2Element(5, 1, 1, 0, 1)) == gl2fp.ClassType(NONSEMISIMPLE, (1,))
    # [[0,-1],[1,0]] mod 7: discriminant -4 = 3, a non-square mod 7
    assert classify(GL2Element(7, 0, -1, 1, 0)).kind == NONSPLIT
    assert classify(GL2Element(7, 1, 0, 0, 2)) == gl2fp.ClassType(SPLIT, (1, 2))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_class_inventory_matches_enumeration(p):
    counted: dict = {}
    total = 0
    for m in enumerate_gl2(p):
        counted[classify(m)] = counted.get(classify(m), 0) + 1
        total += 1
    assert total == gl2_order(p)
    inventory = dict(class_inventory(p))
    assert counted == inventory


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_type_cardinalities_closed_forms(p):
    by_kind = {CENTRAL: 0, NONSEMISIMPLE: 0, SPLIT: 0, NONSPLIT: 0}
    for ct, size in class_inventory(p):
        by_kind[ct.kind] += size
    assert by_kind[CENTRAL] == p - 1
    assert by_kind[NONSEMISIMPLE] == (p - 1) * (p * p - 1)
    assert by_kind[SPLIT] == p * (p + 1) * (p - 1) * (p - 2) // 2
    assert by_kind[NONSPLIT] == p * p * (p - 1) ** 2 // 2


def test_class_type_fractions_closed_forms():
    fr = class_type_fractions(11)
    assert fr == {
        CENTRAL: Fraction(1, 1320),
        NONSEMISIMPLE: Fraction(1, 11),
        SPLIT: Fraction(9, 20),
        NONSPLIT: Fraction(11, 24),
    }
    for p in (3, 5, 7, 11, 13, 31):
        assert sum(class_type_fractions(p).values()) == 1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_steinberg_zero_fraction_and_norm(p):
    data = steinberg_character_data(p)
    assert data.zero_fraction() == Fraction(1, p)
    assert data.norm() == 1
    identity = GL2Element(p, 1, 0, 0, 1)
    assert data.value_of(identity) == p


@pytest.mark.parametrize("p", [5, 7])
def test_fixed_point_oracle_full_enumeration(p):
    for m in enumerate_gl2(p):
        assert steinberg_value_of_matrix(m) == steinberg_value_by_fixed_points(m)


def test_product_character_examples():
    st5 = steinberg_character_data(5)
    st7 = steinberg_character_data(7)
    single = product_character([st5])
    assert single.zero_fraction() == Fraction(1, 5)
    prod = product_character([st5, st7])
    assert prod.nonzero_fraction() == Fraction(24, 35)
    assert prod.zero_fraction() == Fraction(11, 35)
    triple = product_character([st5, st7, steinberg_character_data(11)])
    assert triple.nonzero_fraction() == Fraction(4, 5) * Fraction(6, 7) * Fraction(10, 11)
    with pytest.raises(ValueError):
        product_character([st5, steinberg_character_data(5)])
    with pytest.raises(ValueError):
        product_character([])


def test_product_zero_fraction_vs_explicit_group():
    # element-level cross-check on the explicit GL2(F3) x GL2(F5) group
    g3 = catalog.gl2_group(3)
    g5 = catalog.gl2_group(5)
    st3 = steinberg_character_data(3)
    st5 = steinberg_character_data(5)
    prod = groupcore.direct_product(g3, g5)

    def value(pair):
        v3 = steinberg_value_of_matrix(GL2Element(3, *pair[0]))
        v5 = steinberg_value_of_matrix(GL2Element(5, *pair[1]))
        return v3 * v5

    cf = groupcore.ClassFunction.from_handle_function(prod, value)
    assert groupcore.zero_fraction(cf) == product_character([st3, st5]).zero_fraction()


def test_class_function_value_lookup():
    st5 = steinberg_character_data(5)
    for m in (GL2Element(5, 2, 0, 0, 2), GL2Element(5, 1, 1, 0, 1), GL2Element(5, 0, 4, 1, 0)):
        v = st5.value_of(m)
        assert v == steinberg_value_by_fixed_points(m)
    other = GL2Element(7, 1, 0, 0, 1)
    with pytest.raises(ValueError):
        st5.value_of(other)


def test_enumeration_bound():
    with pytest.raises(ValueError):
        list(enumerate_gl2(37))
