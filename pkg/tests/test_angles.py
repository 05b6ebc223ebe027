from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from multibrot.angles import (
    angle,
    base_d_digits,
    from_digits,
    orbit,
    orbit_info,
    parse_angle,
    sorted_angles,
    tau,
)


@pytest.mark.parametrize("p,q,expected", [(1, 3, "1/3"), (4, 3, "1/3"), (0, 7, "0/1"), (-1, 4, "3/4"), (6, 4, "1/2")])
def test_angle_reduction(p, q, expected):
    assert str(angle(p, q)) == expected


def test_angle_rejects_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        angle(1, 0)


def test_angle_is_immutable_and_hashable():
    a = angle(1, 3)
    with pytest.raises(AttributeError):
        a.numerator = 2
    assert {a, angle(4, 3)} == {a}


@pytest.mark.parametrize("text,expected", [("1/3", angle(1, 3)), ("10/6", angle(2, 3)), ("3", angle(0, 1)), (" 7/14 ", angle(1, 2))])
def test_parse_angle(text, expected):
    assert parse_angle(text) == expected


def test_tau_examples():
    assert tau(2, angle(1, 3)) == angle(2, 3)
    assert tau(2, angle(2, 3)) == angle(1, 3)
    assert tau(3, angle(1, 8)) == angle(3, 8)
    with pytest.raises(ValueError):
        tau(1, angle(1, 3))


def test_orbit_info_examples():
    assert orbit_info(2, angle(1, 3)) == orbit_info(2, angle(2, 3))
    info = orbit_info(2, angle(1, 3))
    assert (info.preperiod, info.period) == (0, 2)
    info = orbit_info(2, angle(1, 2))
    assert (info.preperiod, info.period) == (1, 1)


def _brute_orbit(d, a):
    seen = {}
    x = a.fraction()
    while x not in seen:
        seen[x] = len(seen)
        x = (d * x) % 1
    return seen[x], len(seen) - seen[x]


@pytest.mark.parametrize("d", range(2, 6))
@pytest.mark.parametrize("n", range(2, 6))
def test_orbit_info_of_first_angle(d, n):
    info = orbit_info(d, angle(1, d**n - 1))
    assert (info.preperiod, info.period) == (0, n)
    assert _brute_orbit(d, angle(1, d**n - 1)) == (0, n)


def test_digit_examples():
    assert base_d_digits(2, angle(1, 3), 4) == [0, 1, 0, 1]
    assert base_d_digits(3, angle(1, 2), 3) == [1, 1, 1]
    assert base_d_digits(2, angle(5, 8), 3) == [1, 0, 1]


@pytest.mark.parametrize("d", [2, 3, 5])
def test_coprime_denominators_are_periodic(d):
    for q in range(1, 1001):
        if gcd(q, d) == 1:
            assert orbit_info(d, angle(1, q)).preperiod == 0


angles_st = st.builds(angle, st.integers(0, 10**6), st.integers(1, 10**4))
degrees = st.integers(2, 7)


@given(degrees, angles_st)
def test_orbit_info_matches_brute_force(d, a):
    info = orbit_info(d, a)
    assert (info.preperiod, info.period) == _brute_orbit(d, a)


@given(degrees, angles_st)
def test_digits_reconstruct_angle(d, a):
    info = orbit_info(d, a)
    digits = base_d_digits(d, a, info.preperiod + info.period)
    pre, per = digits[: info.preperiod], digits[info.preperiod :]
    if per == [0]:
        per = []
    assert from_digits(d, pre, per) == a


@given(degrees, st.integers(1, 400))
def test_tau_is_bijection_on_coprime_denominator(d, q):
    if gcd(q, d) != 1:
        return
    images = {tau(d, angle(p, q)) for p in range(q)}
    assert len(images) == len({angle(p, q) for p in range(q)})


@given(degrees, st.integers(1, 6), st.integers(0, 10**4))
def test_period_divides_n(d, n, p):
    assert n % orbit_info(d, angle(p, d**n - 1)).period == 0


def test_orbit_and_sorting():
    assert orbit(2, angle(1, 7), 4) == [angle(1, 7), angle(2, 7), angle(4, 7), angle(1, 7)]
    assert sorted_angles([angle(2, 3), angle(1, 3), angle(4, 3)]) == [angle(1, 3), angle(2, 3)]
    assert angle(1, 3) < angle(1, 2)
    assert float(angle(1, 4)) == 0.25
    assert angle(1, 3) + Fraction(1, 3) == angle(2, 3)
