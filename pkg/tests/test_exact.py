from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from multibrot.exact import BivariatePoly, ExactPoly, GaussianRational as GQ, determinant, parse_gaussian

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)
gaussians = st.builds(GQ, fracs, fracs)
polys = st.lists(gaussians, min_size=1, max_size=5).map(ExactPoly)


@pytest.mark.parametrize(
    "text,value",
    [("3", GQ(3)), ("-1/2", GQ(Fraction(-1, 2))), ("i", GQ(0, 1)), ("2-3i", GQ(2, -3)), ("1/2+1/3i", GQ(Fraction(1, 2), Fraction(1, 3)))],
)
def test_parse_gaussian(text, value):
    assert parse_gaussian(text) == value


def test_parse_gaussian_rejects_junk():
    with pytest.raises(ValueError):
        parse_gaussian("2+x")


@given(gaussians, gaussians)
def test_field_laws(a, b):
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert a + b - b == a
    if b:
        assert a / b * b == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()) == GQ(a.norm())


def test_poly_basics():
    p = ExactPoly.parse("-2,0,1")
    assert p.degree == 2 and str(p) == "z^2 - 2"
    assert p(GQ(2)) == GQ(2)
    assert p.derivative() == ExactPoly([0, 2])
    assert ExactPoly.parse("0,1").compose(p) == p
    assert ExactPoly([1, 0, 0]).degree == 0


@given(polys, polys, gaussians)
def test_composition_and_products(p, q, t):
    assert p.compose(q)(t) == p(q(t))
    assert (p * q)(t) == p(t) * q(t)
    assert (p - q)(t) == p(t) - q(t)
    assert p.conjugate()(t.conjugate()) == p(t).conjugate()


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_determinant_matches_sympy(rows):
    ours = determinant([[GQ(v) for v in row] for row in rows])
    assert ours == GQ(sympy.Matrix(rows).det())


def test_bivariate_normalization_and_printing():
    f = BivariatePoly({(1, 1): GQ(2), (0, 0): GQ(-2)})
    assert f.leading_monomial() == (1, 1)
    n = f.normalized()
    assert str(n) == "X*Y - 1"
    assert n(GQ(2), GQ(Fraction(1, 2))) == 0
