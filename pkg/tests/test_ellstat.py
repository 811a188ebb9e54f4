import pytest

from matchdens.ellstat import (
    AMBIGUOUS,
    CONDUCTOR_37_CURVE,
    BadReductionError,
    Curve,
    chebotarev_histogram,
    count_points,
    count_points_naive,
    frobenius_class,
    parse_curve_file,
    trace_of_frobenius,
)
from matchdens.primes import sieve_primes


def test_curve_validation():
    with pytest.raises(ValueError):
        Curve(0, 0)  # singular
    with pytest.raises(ValueError):
        Curve(-16, 16, conductor=4)  # not square-free
    c = Curve(-16, 16, conductor=37)
    assert c.discriminant() == 2**12 * 37
    assert c.has_good_reduction(5) and not c.has_good_reduction(37)


def test_count_points_example():
    c = Curve(0, 1)
    assert count_points(c, 5) == 6
    assert trace_of_frobenius(c, 5) == 0


@pytest.mark.parametrize("curve", [Curve(0, 1), Curve(-1, 0), CONDUCTOR_37_CURVE])
def test_count_points_matches_naive_oracle(curve):
    for q in sieve_primes(200):
        q = int(q)
        if q <= 3 or not curve.has_good_reduction(q):
            continue
        assert count_points(curve, q) == count_points_naive(curve, q)


def test_hasse_bound_on_samples():
    for q in (11, 101, 1009, 10007):
        a_q = trace_of_frobenius(CONDUCTOR_37_CURVE, q)
        assert a_q * a_q <= 4 * q


def test_bad_reduction_rejected():
    with pytest.raises(BadReductionError):
        count_points(CONDUCTOR_37_CURVE, 3)
    with pytest.raises(BadReductionError):
        count_points(CONDUCTOR_37_CURVE, 37)


def test_frobenius_class_examples():
    assert frobenius_class(0, 5, 7) == "split"       # -20 = 1 mod 7, a square
    assert frobenius_class(1, 11, 5) == "nonsplit"   # -43 = 2 mod 5, non-square
    assert frobenius_class(4, 29, 5) == AMBIGUOUS    # 16 - 116 = 0 mod 5
    with pytest.raises(ValueError):
        frobenius_class(1, 11, 11)


def test_histogram_small_run():
    hist = chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 3000)
    assert hist.total == sum(st.count for st in hist.stats.values())
    assert set(hist.stats) == {"split", "nonsplit", AMBIGUOUS}
    from fractions import Fraction

    assert hist.stats["split"].expected == Fraction(9, 20)
    assert hist.stats["nonsplit"].expected == Fraction(11, 24)
    assert hist.stats[AMBIGUOUS].expected == Fraction(11, 120)
    for sample in hist.samples:
        assert sample.a_q * sample.a_q <= 4 * sample.q
        assert sample.class_type == frobenius_class(sample.a_q, sample.q, 11)


def test_histogram_deterministic():
    h1 = chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 2000)
    h2 = chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 2000)
    assert [(s.q, s.a_q, s.class_type) for s in h1.samples] == [
        (s.q, s.a_q, s.class_type) for s in h2.samples
    ]


def test_histogram_workers_match_single_thread():
    h1 = chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 2000)
    h2 = chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 2000, workers=2)
    assert [(s.q, s.a_q) for s in h1.samples] == [(s.q, s.a_q) for s in h2.samples]


def test_histogram_errors_and_warnings():
    with pytest.raises(ValueError):
        chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 4)  # no good primes
    with pytest.warns(UserWarning):
        chebotarev_histogram(CONDUCTOR_37_CURVE, 5, 500)


def test_resolve_scalar_smoke():
    h = chebotarev_histogram(CONDUCTOR_37_CURVE, 11, 5000, resolve_scalar=True, seed=1)
    kinds = {s.class_type for s in h.samples}
    assert kinds <= {"split", "nonsplit", AMBIGUOUS, "central"}
    # ambiguous + central together are measured against the combined expectation
    combined = h.stats[AMBIGUOUS].count
    raw = sum(1 for s in h.samples if s.class_type in (AMBIGUOUS, "central"))
    assert combined == raw


def test_parse_curve_file():
    curves = parse_curve_file("-16 16 37 37a\n0 1\n# comment\n\n-1 0 # tail comment\n")
    assert len(curves) == 3
    assert curves[0].conductor == 37 and curves[0].label == "37a"
    assert curves[1].conductor is None
    with pytest.raises(ValueError):
        parse_curve_file("5\n")
