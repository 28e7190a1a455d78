import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalegauge.generators import make_rng
from scalegauge.scaled_numbers import element_with_value, make_structure, value_of
from scalegauge.term_scaling import (
    PowerSeries,
    RationalTerm,
    Summand,
    check_term_scaling,
    eval_series_scaled,
    eval_term_scaled,
    exp_series,
    geometric_series,
    random_term,
    scaled_power,
)


def rel(got, want):
    return abs(got - want) / max(1.0, abs(want))


def test_single_ratio_reference():
    t = RationalTerm.of((3 + 1j, 1, 2, 1))
    assert eval_term_scaled(t, make_structure(1)).element == (3 + 1j) / 2


@pytest.mark.parametrize("c", [2, 1j, 0.3 + 0.7j, -4])
def test_single_ratio_gets_one_factor_of_c(c):
    t = RationalTerm.of((1.5 - 2j, 1, 0.5 + 1j, 1))
    got = eval_term_scaled(t, make_structure(c)).element
    assert rel(got, c * (1.5 - 2j) / (0.5 + 1j)) <= 1e-15


def test_random_term_example():
    c = 0.3 + 0.7j
    t = random_term(make_rng(7), summands=5, max_power=5)
    got = eval_term_scaled(t, make_structure(c)).element
    assert rel(got, c * t.plain_value()) <= 1e-10


def test_summand_validation():
    with pytest.raises(ValueError):
        Summand(1, 0, 1, 1)
    with pytest.raises(ValueError):
        Summand(1, 1, 0, 1)


def test_scaled_power_value():
    s = make_structure(2 - 1j)
    x = element_with_value(1.1 + 0.2j, s)
    assert rel(value_of(scaled_power(x, 5)), (1.1 + 0.2j) ** 5) <= 1e-14
    assert scaled_power(x, 1) == x


def test_exp_series_at_zero():
    for c in (1, 2, 1j, 0.5 - 3j):
        assert eval_series_scaled(exp_series(30), 0, make_structure(c)).element == c


def test_exp_series_at_one_c2():
    res = eval_series_scaled(exp_series(30), 1, make_structure(2))
    assert abs(res.element - 2 * math.e) <= 1e-9
    assert res.residue_bound < 1e-9


def test_geometric_series():
    res = eval_series_scaled(geometric_series(60), 0.5, make_structure(1j))
    assert abs(res.element - 2j) <= 1e-9


def test_plain_series_horner():
    f = PowerSeries((1, 2, 3))
    assert f.plain_value(2) == 1 + 4 + 12
    assert f.truncation_order == 3


@settings(max_examples=200, deadline=None)
@given(
    st.floats(0.1, 10),
    st.floats(-math.pi, math.pi),
    st.integers(0, 2**32 - 1),
)
def test_term_scaling_property(r, theta, seed):
    c = cmath.rect(r, theta)
    t = random_term(np.random.default_rng(seed))
    got = eval_term_scaled(t, make_structure(c)).element
    assert rel(got, c * t.plain_value()) <= 1e-10


@given(st.floats(-0.85, 0.85), st.floats(-0.3, 0.3), st.floats(0.1, 10))
def test_series_scaling_property(re, im, r):
    a = complex(re, im)
    f = exp_series(25)
    got = eval_series_scaled(f, a, make_structure(r * 1j)).element
    assert rel(got, r * 1j * f.plain_value(a)) <= 1e-10


def test_check_term_scaling_small():
    rep = check_term_scaling(500, seed=3)
    assert rep.passed and rep.cases == 1000
