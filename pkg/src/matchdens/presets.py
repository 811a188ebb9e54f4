"""Reproduction presets for the headline exact densities.

These wire the low-level modules together: the tetrahedral fiber-product
configuration (matching density 17/32), the twisted central-extension family
(matching density 1 - 1/(2k^2) from a base zero-trace density 1 - 1/k^2), and
the GL2 report for one prime (class-type fractions plus the p-dimensional
character's zero fraction and norm).
"""

from __future__ import annotations

from fractions import Fraction

from . import catalog, gl2fp, groupcore
from .chartable import character_table_small, integer_valued_two_dimensional
from .density import twist_density


def tetrahedral_matching_density() -> tuple[Fraction, dict]:
    """Matching density of the two pulled-back 2-dimensional characters on the
    fiber product of two binary tetrahedral groups over their common C3
    quotient.  Returns the exact fraction (17/32) plus construction details."""
    g = catalog.sl2f3_group()
    chi = integer_valued_two_dimensional(character_table_small(g))
    q = groupcore.abelianization(g)
    fiber = groupcore.fiber_product(g, g, q, q, name="sl2f3 x_C3 sl2f3")
    left = groupcore.pullback(chi, fiber, lambda pair: pair[0], name="left-factor")
    right = groupcore.pullback(chi, fiber, lambda pair: pair[1], name="right-factor")
    value = groupcore.matching_fraction(left, right)
    details = {
        "factor_order": g.order,
        "quotient_order": q.target.order,
        "fiber_order": fiber.order,
        "fiber_class_count": len(fiber.conjugacy_classes()),
        "character_degree": 2,
    }
    return value, details


def serre_twist_density(k: int) -> dict:
    """The order-2 twist of a k-dimensional representation with zero-trace
    density 1 - 1/k^2: matching density 1 - 1/(2 k^2)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    base = 1 - Fraction(1, k * k)
    return {
        "k": k,
        "base_zero_trace_density": base,
        "twist_order": 2,
        "matching_density": twist_density(base, 2),
    }


def steinberg_report(p: int) -> dict:
    """Exact class-type fractions and the p-dimensional character's numbers."""
    data = gl2fp.steinberg_character_data(p)
    return {
        "p": p,
        "group_order": gl2fp.gl2_order(p),
        "class_count": len(data.entries),
        "class_type_fractions": gl2fp.class_type_fractions(p),
        "steinberg_zero_fraction": data.zero_fraction(),
        "steinberg_nonzero_fraction": data.nonzero_fraction(),
        "steinberg_norm": data.norm(),
        "norm_check": data.norm() == 1,
    }
