import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cfskein.coeff import (CyclotomicField, DualScalar, LaurentScalar, RootOfUnityContext,
                           cyclotomic_polynomial, evaluate_at_root, first_order)

u = LaurentScalar.monomial

laurent = st.dictionaries(st.integers(-12, 12), st.integers(-5, 5), max_size=5).map(LaurentScalar)
odd_n = st.sampled_from([3, 5, 7, 9, 15])


def test_inverse_powers_cancel():
    assert u(2) * u(-2) == LaurentScalar({0: 1})


def test_distributivity_example():
    assert (LaurentScalar({0: 1, 4: 1})) * u(2) == LaurentScalar({2: 1, 6: 1})


def test_cancellation_leaves_empty_map():
    z = u(2) + u(2, -1)
    assert z.is_zero() and z.terms == {}


def test_rendering_is_ascending():
    s = LaurentScalar({4: 1, -2: 3, 0: -2})
    assert str(s) == "3*u^-2 - 2 + 1*u^4"


def test_omega_and_q_exponents():
    assert LaurentScalar.omega(1) == u(2)
    assert LaurentScalar.omega(Fraction(1, 2)) == u(1)
    assert LaurentScalar.q(1) == LaurentScalar.omega(-4)
    with pytest.raises(ValueError):
        LaurentScalar.omega(Fraction(1, 3))


def test_u_at_three_is_zeta_squared():
    ctx = RootOfUnityContext(3)
    assert evaluate_at_root(u(1), ctx) == ctx.zeta(2)
    fl = RootOfUnityContext(3, "float")
    assert abs(evaluate_at_root(u(1), fl) - cmath.exp(4j * cmath.pi / 3)) < 1e-12


def test_q_at_three_is_zeta_squared():
    ctx = RootOfUnityContext(3)
    assert evaluate_at_root(LaurentScalar.q(1), ctx) == ctx.zeta(2)


def test_constant_evaluates_to_itself():
    ctx = RootOfUnityContext(5)
    assert evaluate_at_root(LaurentScalar({0: 1}), ctx) == ctx.one


@pytest.mark.parametrize("n", [0, 1, 2, 4, 10])
def test_context_rejects_bad_orders(n):
    with pytest.raises(ValueError):
        RootOfUnityContext(n)


def test_cyclotomic_polynomials_match_known():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(9) == (1, 0, 0, 1, 0, 0, 1)
    assert cyclotomic_polynomial(15) == (1, -1, 0, 1, -1, 1, 0, -1, 1)


def test_field_is_cached():
    assert CyclotomicField(7) is CyclotomicField(7)


@given(n=odd_n, a=st.integers(-20, 20), b=st.integers(-20, 20))
def test_zeta_powers_match_complex(n, a, b):
    ctx = RootOfUnityContext(n)
    z = ctx.zeta(a) * ctx.zeta(b) + ctx.zeta(a)
    w = cmath.exp(2j * cmath.pi * a / n)
    assert abs(complex(z) - (w * cmath.exp(2j * cmath.pi * b / n) + w)) < 1e-9


@given(n=odd_n, coeffs=st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_inverse_is_exact(n, coeffs):
    ctx = RootOfUnityContext(n)
    x = ctx.zero
    for i, c in enumerate(coeffs):
        x = x + ctx.zeta(i) * c
    if x.is_zero():
        return
    assert x * x.inverse() == ctx.one


@settings(max_examples=60)
@given(a=laurent, b=laurent, n=odd_n)
def test_evaluation_is_multiplicative(a, b, n):
    ctx = RootOfUnityContext(n)
    assert evaluate_at_root(a * b, ctx) == evaluate_at_root(a, ctx) * evaluate_at_root(b, ctx)
    fl = RootOfUnityContext(n, "float")
    exact = complex(evaluate_at_root(a * b, ctx))
    assert abs(evaluate_at_root(a * b, fl) - exact) <= 1e-12 * max(1.0, abs(exact)) * 10


@given(n=odd_n)
def test_root_identities(n):
    ctx = RootOfUnityContext(n)
    w = evaluate_at_root(LaurentScalar.omega(1), ctx)
    half = evaluate_at_root(u(1), ctx)
    assert w ** n == ctx.one
    assert half * half == w


@given(a=laurent, b=laurent)
def test_scalar_ring_laws(a, b):
    assert a * b == b * a
    assert (a + b) - b == a
    assert a * LaurentScalar({0: 1}) == a


def test_first_order_examples():
    assert first_order(LaurentScalar.omega(2)) == DualScalar(1, Fraction(-1, 2))
    for m in (1, 3):
        d = first_order(LaurentScalar.omega(m) - LaurentScalar.omega(-m))
        assert d == DualScalar(0, Fraction(-m, 2))
    assert first_order(LaurentScalar({0: 5})) == DualScalar(5, 0)


@given(a=laurent, b=laurent)
def test_first_order_is_ring_morphism(a, b):
    assert first_order(a + b) == first_order(a) + first_order(b)
    assert first_order(a * b) == first_order(a) * first_order(b)


def test_dual_numbers_square_to_zero():
    eps = DualScalar(0, 1)
    assert eps * eps == DualScalar(0, 0)
