import cmath
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from multibrot.errors import DegreeCapError
from multibrot.pcf import (
    critical_orbit_poly,
    hyperbolic_centers,
    is_pcf_numeric,
    main_component_point,
    misiurewicz,
    orbit_type,
    parabolic_boundary,
    pcf_points,
)

C = sympy.Symbol("c")


def sympy_orbit(d, n):
    p = C
    for _ in range(n - 1):
        p = sympy.expand(p**d + C)
    return sympy.Poly(p, C)


def exact_period_count(d, n):
    return sum(sympy.mobius(n // k) * d ** (k - 1) for k in sympy.divisors(n))


def test_small_orbit_polynomials():
    assert critical_orbit_poly(2, 2).coeffs == (0, 1, 1)
    assert critical_orbit_poly(2, 3).coeffs == (0, 1, 1, 2, 1)
    assert critical_orbit_poly(3, 2).coeffs == (0, 1, 0, 1)


@pytest.mark.parametrize("d,n", [(2, 1), (2, 4), (2, 6), (3, 4), (4, 3), (5, 3)])
def test_orbit_polynomial_matches_sympy(d, n):
    p = critical_orbit_poly(d, n)
    assert p.degree == d ** (n - 1)
    assert list(p.coeffs) == [int(a) for a in reversed(sympy_orbit(d, n).all_coeffs())]


def test_degree_cap():
    with pytest.raises(DegreeCapError):
        critical_orbit_poly(2, 14, cap=4096)
    with pytest.raises(DegreeCapError):
        hyperbolic_centers(3, 9)


def test_small_centers():
    assert hyperbolic_centers(2, 1) == [0j]
    assert hyperbolic_centers(2, 2) == [pytest.approx(-1)]
    real = [c.real for c in hyperbolic_centers(2, 3) if abs(c.imag) < 1e-12]
    assert real == [pytest.approx(-1.7548776662466927)]


@pytest.mark.parametrize("d,n", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (4, 3)])
def test_center_counts_against_moebius(d, n):
    centers = hyperbolic_centers(d, n)
    assert len(centers) == exact_period_count(d, n)
    for c in centers:
        assert orbit_type(d, c, 2 * n + 2, tol=1e-9) == (0, n)


def test_degree_three_counts():
    assert [len(hyperbolic_centers(3, n)) for n in (1, 2, 3, 4)] == [1, 2, 8, 24]


def test_centers_against_sympy_roots():
    roots = sympy.Poly(sympy_orbit(2, 4), C).nroots(n=30, maxsteps=200)
    exact4 = [complex(r) for r in roots if orbit_type(2, complex(r), 10, tol=1e-9) == (0, 4)]
    ours = hyperbolic_centers(2, 4)
    assert len(ours) == len(exact4) == 6
    for z in exact4:
        assert min(abs(z - w) for w in ours) < 1e-10


def test_centers_closed_under_symmetry():
    for d, n in [(2, 5), (3, 3), (4, 3)]:
        centers = hyperbolic_centers(d, n)
        for c in centers:
            assert min(abs(c.conjugate() - w) for w in centers) < 1e-10
            rot = cmath.exp(2j * math.pi / (d - 1)) * c
            assert min(abs(rot - w) for w in centers) < 1e-10


def test_misiurewicz_examples():
    assert misiurewicz(2, 2, 1) == [pytest.approx(-2)]
    assert misiurewicz(2, 1, 1) == []
    assert misiurewicz(3, 2, 1)
    both = misiurewicz(2, 2, 2)
    for target in (1j, -1j):
        assert min(abs(target - w) for w in both) < 1e-12
    with pytest.raises(ValueError):
        misiurewicz(2, 0, 1)


@pytest.mark.parametrize("d,m,n", [(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2), (3, 2, 1), (3, 2, 2)])
def test_misiurewicz_against_sympy(d, m, n):
    poly = sympy.Poly(sympy_orbit(d, m + n).as_expr() - sympy_orbit(d, m).as_expr(), C)
    oracle = []
    for r in poly.nroots(n=30, maxsteps=300):
        z = complex(r)
        if orbit_type(d, z, m + n + 2, tol=1e-8) == (m, n) and all(abs(z - w) > 1e-8 for w in oracle):
            oracle.append(z)
    ours = misiurewicz(d, m, n)
    assert len(ours) == len(oracle)
    for z in oracle:
        assert min(abs(z - w) for w in ours) < 1e-9
    for c in ours:
        assert orbit_type(d, c, m + n + 2, tol=1e-9) == (m, n)


def test_pcf_points_rows():
    pts = pcf_points(2, 2, m=1) + pcf_points(2, 1, m=2) + pcf_points(2, 3)
    kinds = {(p.kind, p.preperiod, p.period) for p in pts}
    assert kinds == {("misiurewicz", 2, 1), ("center", 0, 3)}
    assert all(len(p.row()) == 5 for p in pts)


def test_main_component_examples():
    (p,) = main_component_point(2, -1)
    assert abs(p.c + 0.75) < 1e-12 and abs(p.alpha + 0.5) < 1e-12
    (p,) = main_component_point(2, 1)
    assert abs(p.c - 0.25) < 1e-12
    assert main_component_point(3, 0)[0].c == 0
    with pytest.raises(ValueError):
        main_component_point(2, 1.5)
    with pytest.raises(ValueError):
        parabolic_boundary(2, 1)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_parabolic_boundary_residuals(d, n):
    params = parabolic_boundary(d, n)
    assert len(params) == d - 1
    for p in params:
        assert max(p.residuals(d)) < 1e-10


@given(st.floats(0, 1), st.integers(2, 6))
def test_main_component_residuals(t, d):
    lam = cmath.exp(2j * math.pi * t)
    for p in main_component_point(d, lam):
        assert max(p.residuals(d)) < 1e-10


@pytest.mark.parametrize("d", [2, 3])
def test_boundary_points_are_sandwiched(d):
    # slightly inside the boundary the orbit converges to the fixed point;
    # on the boundary that fixed point is indifferent
    for k in range(64):
        lam = cmath.exp(2j * math.pi * k / 64)
        for inner in main_component_point(d, 0.99 * lam):
            z = 0j
            for _ in range(3000):
                z = z**d + inner.c
            assert abs(z - inner.alpha) < 1e-6
        for p in main_component_point(d, lam):
            assert abs(d * p.alpha ** (d - 1)) == pytest.approx(1)


def test_is_pcf_numeric_examples():
    assert is_pcf_numeric(2, 0)
    assert is_pcf_numeric(2, -1)
    assert is_pcf_numeric(2, -2)
    assert is_pcf_numeric(2, 1j)
    assert not is_pcf_numeric(2, 1)
    assert not is_pcf_numeric(2, -0.75)
    # an attracting cycle draws the orbit together too, so the heuristic
    # cannot tell c = -1/2 (not PCF) from a PCF parameter
    assert is_pcf_numeric(2, -0.5)
