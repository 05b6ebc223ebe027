import cmath
import math

import pytest

from multibrot.angles import angle
from multibrot.boettcher import affine_symmetries, green_parameter, phi_eval
from multibrot.errors import LandingMismatchError, PotentialFloorError, UndecidableError
from multibrot.pcf import misiurewicz, parabolic_boundary
from multibrot.rays import (
    prop35_check,
    trace_dynamic_ray,
    trace_parameter_ray,
    verify_landing_pair,
    wake_contains,
)

PERIOD3_ROOT = complex(-1 / 8, 3 * math.sqrt(3) / 8)


def test_ray_zero_lands_at_cusp():
    tr = trace_parameter_ray(2, angle(0, 1))
    assert tr.converged
    assert abs(tr.landing_estimate - 0.25) < 1e-4
    assert all(abs(p.imag) < 1e-12 for p in tr.points)


def test_ray_half_lands_at_tip():
    tr = trace_parameter_ray(2, angle(1, 2))
    tip = misiurewicz(2, 2, 1)[0]
    assert abs(tr.landing_estimate - tip) < 1e-4
    assert "denominator-divisible-by-d" in tr.flags


def test_ray_third_lands_at_root():
    tr = trace_parameter_ray(2, angle(1, 3))
    assert abs(tr.landing_estimate + 0.75) < 1e-4


def test_samples_are_on_the_ray():
    theta = angle(1, 7)
    tr = trace_parameter_ray(2, theta)
    pots = [t for t, _ in tr.samples]
    assert all(a > b for a, b in zip(pots, pots[1:]))
    for t, c in tr.samples:
        if t > 1e-6:
            assert green_parameter(2, c) == pytest.approx(t, rel=1e-6)
    for t, c in tr.samples[:12:3]:
        w = phi_eval(2, c)
        assert abs(w - cmath.exp(complex(t, 2 * math.pi * float(theta)))) < 1e-6 * abs(w)


def test_landing_pair_examples():
    pair = verify_landing_pair(2, angle(1, 3), angle(2, 3))
    assert abs(pair.landing_point + 0.75) < 1e-3 and pair.period == 2
    pair = verify_landing_pair(2, angle(1, 7), angle(2, 7), tol=1e-3)
    assert abs(pair.landing_point - PERIOD3_ROOT) < 1e-3
    with pytest.raises(LandingMismatchError):
        verify_landing_pair(2, angle(1, 3), angle(1, 7))
    with pytest.raises(ValueError):
        verify_landing_pair(2, angle(1, 2), angle(1, 3))
    with pytest.raises(ValueError):
        verify_landing_pair(2, angle(1, 3), angle(1, 3))


def test_prop35_examples():
    pair, param = prop35_check(2, 2)
    assert (str(pair.theta), str(pair.theta_prime)) == ("1/3", "2/3")
    assert abs(param.alpha + 0.5) < 1e-12 and abs(param.c + 0.75) < 1e-12
    pair, param = prop35_check(2, 3)
    assert abs(pair.landing_point - PERIOD3_ROOT) < 1e-3
    pair, param = prop35_check(3, 2)
    assert (str(pair.theta), str(pair.theta_prime)) == ("1/8", "3/8")
    assert abs(3 * param.alpha**2 + 1) < 1e-12
    assert abs(param.alpha**3 + param.c - param.alpha) < 1e-12
    assert min(abs(pair.landing_point - p.c) for p in parabolic_boundary(3, 2)) < 1e-3


@pytest.mark.parametrize("p,q", [(1, 7), (3, 15), (1, 5), (1, 15)])
def test_conjugation_symmetry(p, q):
    a = trace_parameter_ray(2, angle(p, q))
    b = trace_parameter_ray(2, angle(-p, q))
    assert abs(a.landing_estimate - b.landing_estimate.conjugate()) < 2e-4


@pytest.mark.parametrize("d,p,q", [(3, 1, 8), (3, 1, 26), (4, 1, 15)])
def test_rotation_symmetry(d, p, q):
    base = trace_parameter_ray(d, angle(p, q)).landing_estimate
    for mu in affine_symmetries(d):
        shifted = angle(p, q) + mu.turn
        rotated = trace_parameter_ray(d, shifted).landing_estimate
        assert abs(rotated - mu.A * base) < 2e-4


def test_dynamic_ray_radial_for_c_zero():
    theta = angle(1, 5)
    tr = trace_dynamic_ray(2, 0, theta)
    target = cmath.exp(2j * math.pi * 0.2)
    assert tr.converged and abs(tr.landing_estimate - target) < 1e-8
    for t, z in tr.samples:
        assert abs(z - math.exp(t) * target) < 1e-9


def test_dynamic_ray_parabolic_fixed_point():
    tr = trace_dynamic_ray(2, -0.75, angle(1, 3))
    assert tr.converged and abs(tr.landing_estimate + 0.5) < 1e-3


def test_dynamic_ray_escaping_parameter():
    with pytest.raises(PotentialFloorError):
        trace_dynamic_ray(2, 1, angle(0, 1))
    tr = trace_dynamic_ray(2, 1, angle(0, 1), potential_floor=0.5)
    assert tr.method == "truncated" and not tr.converged
    pots = [t for t, _ in tr.samples]
    # sampling stops at the first potential at or below the floor
    assert pots[-1] <= 0.5 < pots[-2]


def test_dynamic_ray_repelling_landing():
    # the beta fixed point (1 + sqrt(1 - 4c))/2 for c = -1 (basilica)
    tr = trace_dynamic_ray(2, -1, angle(0, 1))
    assert tr.converged and abs(tr.landing_estimate - (1 + math.sqrt(5)) / 2) < 1e-6


def test_wake_examples():
    pair = verify_landing_pair(2, angle(1, 3), angle(2, 3))
    assert wake_contains(2, pair, -1)
    assert not wake_contains(2, pair, 0)
    assert not wake_contains(2, pair, 1)
    assert wake_contains(2, pair, -1.9)
    with pytest.raises(UndecidableError):
        wake_contains(2, pair, pair.landing_point)


def test_wake_of_period_three():
    pair = verify_landing_pair(2, angle(1, 7), angle(2, 7), tol=1e-3)
    centers = [complex(-0.12256116687665362, 0.7448617666197442)]
    assert wake_contains(2, pair, centers[0])
    assert not wake_contains(2, pair, centers[0].conjugate())


def test_trace_serialization():
    d = trace_parameter_ray(2, angle(1, 3)).to_dict()
    assert d["theta"] == "1/3" and d["converged"] and len(d["samples"]) > 10
