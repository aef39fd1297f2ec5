import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys, rationals
from hermzeros.exact_poly import (
    DyadicInterval,
    Poly,
    add,
    apply_lambda,
    compose_affine,
    derivative,
    divides,
    evaluate,
    format_dyadic,
    format_rational,
    gcd,
    mul,
    parse_dyadic,
    parse_rational,
    poly_divmod,
    squarefree_decomposition,
    squarefree_part,
)
from hermzeros.hermite import hermite

x = Poly.x()


def test_parse_and_format_rationals():
    assert parse_rational("3/6") == F(1, 2)
    assert parse_rational("-4") == F(-4)
    assert parse_rational(7) == F(7)
    assert format_rational(F(-2, 4)) == "-1/2"
    assert format_rational(3) == "3/1"
    for bad in ("1/0", "", "0.5", "abc"):
        with pytest.raises(ValueError):
            parse_rational(bad)
    with pytest.raises(ValueError):
        parse_rational(0.5)
    with pytest.raises(ValueError):
        parse_rational(True)


def test_add():
    assert add(2 * x, 4 * x**2 - 2) == 4 * x**2 + 2 * x - 2
    p = x**3 - F(1, 3)
    assert add(p, Poly()) == p
    z = add(x - 1, 1 - x)
    assert z.is_zero() and z.degree == -math.inf


def test_mul():
    assert mul(x - 2, x + 1) == x**2 - x - 2
    p = 3 * x**2 + F(1, 2)
    assert mul(p, Poly([1])) == p
    assert mul(p, Poly()).is_zero()


def test_derivative():
    assert derivative(4 * x**2 - 2) == 8 * x
    assert derivative(Poly([5])).is_zero()
    assert derivative(x**3 / 6 - x / 4) == x**2 / 2 - F(1, 4)


def test_apply_lambda():
    assert apply_lambda(4 * x**2 - 2) == 8 * x**3 - 12 * x
    assert apply_lambda(Poly([1])) == 2 * x
    assert apply_lambda(x) == 2 * x**2 - 1


def test_evaluate():
    assert evaluate(4 * x**2 - 2, 0) == -2
    p = 7 * x**3 + x + F(2, 3)
    assert evaluate(p, 0) == F(2, 3)
    assert evaluate(hermite(4), 1) == -20
    assert p(F(1, 2)) == evaluate(p, F(1, 2))


def test_compose_affine():
    assert compose_affine(x**2, 2, 1) == 4 * x**2 + 4 * x + 1
    p = x**3 - x + 5
    assert compose_affine(p, 1, 0) == p
    assert compose_affine(hermite(1), 1, F(1, 2)) == 2 * x + 1


def test_gcd():
    assert gcd(x**2 - 1, x - 1) == x - 1
    p = 3 * x**2 - 6 * x
    assert gcd(p, p) == p.monic()
    assert gcd(hermite(3), derivative(hermite(3))) == Poly([1])
    assert gcd(Poly(), x + 2) == x + 2
    with pytest.raises(ValueError, match="undefined gcd"):
        gcd(Poly(), Poly())


def test_gcd_large_hermite_pair_is_one():
    # consecutive Hermite polynomials are coprime; coefficient growth stress
    assert gcd(hermite(60), hermite(59)) == Poly([1])


def test_divmod_and_divides():
    q, r = poly_divmod(x**3 + 2 * x + 1, x - 1)
    assert q * (x - 1) + r == x**3 + 2 * x + 1 and r.degree < 1
    assert divides(x + 1, x**2 - 1)
    assert not divides(x + 2, x**2 - 1)
    with pytest.raises(ZeroDivisionError):
        poly_divmod(x, Poly())


def test_squarefree():
    p = (x - 1) ** 3 * (x + 2) ** 2 * (x**2 + 1)
    assert squarefree_part(p) == ((x - 1) * (x + 2) * (x**2 + 1)).monic()
    dec = dict((m, f) for f, m in squarefree_decomposition(p.scale(5)))
    assert dec == {1: x**2 + 1, 2: x + 2, 3: x - 1}


def test_repr_and_json_round_trip():
    assert repr(hermite(4)) == "Poly(16*x^4 - 48*x^2 + 12)"
    p = F(-1, 3) * x**2 + 2
    assert Poly.from_json(p.to_json()) == p
    assert p.to_json() == ["2/1", "0/1", "-1/3"]


def test_dyadic_format():
    assert format_dyadic(F(3, 4)) == "3*2^-2"
    assert format_dyadic(F(-8)) == "-1*2^3"
    assert parse_dyadic("3*2^-2") == F(3, 4)
    with pytest.raises(ValueError):
        format_dyadic(F(1, 3))
    iv = DyadicInterval(F(1, 2), F(3, 4))
    assert DyadicInterval.from_json(iv.to_json()) == iv
    with pytest.raises(ValueError):
        DyadicInterval(F(1), F(0))


@given(polys(nonzero=True))
def test_lambda_raises_degree_and_doubles_leading(p):
    q = apply_lambda(p)
    assert q.degree == p.degree + 1
    assert q.leading == 2 * p.leading


@given(polys())
def test_derivative_of_lambda_product_rule(p):
    dp = derivative(p)
    assert derivative(apply_lambda(p)) == 2 * p + 2 * x * dp - derivative(dp)


@given(polys(), polys(), rationals())
def test_evaluation_is_multiplicative(p, q, t):
    assert evaluate(mul(p, q), t) == evaluate(p, t) * evaluate(q, t)


@given(polys(), rationals().filter(bool), rationals())
def test_affine_composition_inverts(p, a, b):
    assert compose_affine(compose_affine(p, a, b), 1 / a, -b / a) == p


@given(polys(max_degree=5), polys(max_degree=5))
def test_gcd_divides_both(p, q):
    if p.is_zero() and q.is_zero():
        return
    g = gcd(p, q)
    assert divides(g, p) and divides(g, q)


@given(polys(max_degree=4, nonzero=True), polys(max_degree=4, nonzero=True))
def test_gcd_recovers_common_factor(a, b):
    common = x**2 - 2
    g = gcd(a * common, b * common)
    assert divides(common, g)


@given(st.lists(rationals(), min_size=1, max_size=4), st.integers(1, 3))
def test_squarefree_decomposition_reconstructs(roots, k):
    p = Poly.from_roots(roots) ** k
    prod = Poly([1])
    for f, m in squarefree_decomposition(p):
        prod = prod * f**m
    assert prod == p.monic()
