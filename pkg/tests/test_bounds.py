import math

import pytest

from treeperim.bounds import (
    CSV_HEADER,
    bounds_csv,
    epsilon_window,
    ilog_ceil,
    ilog_floor,
    pathwidth_formula,
    peak_bounds,
    peak_bounds_q2_real,
    prior_bounds,
)


def test_integer_logs_are_exact():
    for q in (2, 3, 4):
        for k in range(1, 30):
            assert ilog_floor(q**k, q) == k
            assert ilog_floor(q**k - 1, q) == k - 1
            assert ilog_ceil(q**k, q) == k
            assert ilog_ceil(q**k + 1, q) == k + 1


def test_prior_bounds():
    oy, bc, vr = prior_bounds(4, 10, c=1.0)
    assert bc.lower_real == pytest.approx(5.0)
    assert prior_bounds(2, 42, c=1.0)[2].lower_real == pytest.approx(3.0)
    assert prior_bounds(2, 2, c=1.0)[2].lower_real == 0.0
    with pytest.raises(ValueError):
        prior_bounds(2, 5)
    assert oy.upper_real is None


def test_peak_bounds_examples():
    r = peak_bounds(5, 7)
    assert (r.lower_int, r.upper_int) == (7, 7)
    r = peak_bounds(3, 9)
    assert r.lower_real == pytest.approx(9 - 2 - (math.log(2, 3) + 1))
    assert (r.lower_int, r.upper_int) == (6, 9)
    r = peak_bounds(2, 12)
    assert (r.lower_int, r.upper_int) == (3, 6)


def test_lower_below_upper():
    for q in (2, 3, 4, 5):
        for d in range(1, 40):
            r = peak_bounds(q, d)
            assert r.lower_int <= r.upper_int


def test_real_q2_form_is_weaker():
    for d in range(2, 60):
        assert peak_bounds_q2_real(d) <= peak_bounds(2, d).lower_real + 1e-9


def test_pathwidth_formula():
    assert pathwidth_formula(3, 5) == 5
    assert pathwidth_formula(2, 4) == 2
    assert pathwidth_formula(7, 0) == 0


def test_csv():
    text = bounds_csv([peak_bounds(3, 9)])
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert "\r" not in text


def test_epsilon_window():
    lo, hi = epsilon_window(3)
    assert lo == pytest.approx(1 - math.log(2, 3)) and hi == 3.0
    with pytest.raises(ValueError):
        epsilon_window(2)


def test_bad_inputs():
    with pytest.raises(ValueError):
        peak_bounds(1, 3)
    with pytest.raises(ValueError):
        peak_bounds(2, 0)
