from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from _helpers import random_balanced, random_vector, seeded
from conftest import SURFACE_NAMES, surface
from cfskein.coeff import LaurentScalar, RootOfUnityContext
from cfskein.qtorus import (ExpressionError, LatticeError, SkewLattice, TorusElement,
                            balanced_basis, balanced_lattice, bezout_two_prime, central_elements,
                            cf_algebra, commutator, corner_weights, edge_exponents,
                            equivariant_torus, face_sum_lattice, frobenius_j, i_delta,
                            is_balanced, morita_embeddings, ordered_product, parse_expression,
                            parse_laurent, render_element, satisfies_switch, weyl_normalize)
from cfskein.qtrace import phi_leaf, theta_leaf
from cfskein.surface import build_cover

u = LaurentScalar.monomial


def mono(lat, x, c=1):
    return TorusElement.monomial(lat, x, c)


def det(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        prod = 1
        for i in range(n):
            prod *= rows[i][p[i]]
        total += -prod if inv % 2 else prod
    return total


def test_torus_generators_commutation(torus):
    lat = cf_algebra(torus)
    x, y = mono(lat, (1, 0, 0)), mono(lat, (0, 1, 0))
    # WP(e0, e1) = 2 on the once-punctured torus, so [x][y] = omega^2 [x+y]
    assert x * y == mono(lat, (1, 1, 0), u(4))
    assert y * x == mono(lat, (1, 1, 0), u(-4))


def test_weyl_vs_ordered_product(torus):
    lat = cf_algebra(torus)
    w = weyl_normalize(lat, [(0, 1), (1, 1)])
    assert w == mono(lat, (1, 1, 0))
    assert ordered_product(lat, [(0, 1), (1, 1)]) == w.scale(u(4))


def test_inverse_monomial(torus):
    lat = cf_algebra(torus)
    x = mono(lat, (2, -1, 3))
    assert x * mono(lat, (-2, 1, -3)) == TorusElement.one(lat)


def test_sum_product_distributes(torus):
    lat = cf_algebra(torus)
    a = parse_expression(lat, "[Z0] + [Z1]")
    b = parse_expression(lat, "[Z2]")
    assert a * b == mono(lat, (1, 0, 0)) * b + mono(lat, (0, 1, 0)) * b
    assert a * b == mono(lat, (1, 0, 1), u(-4)) + mono(lat, (0, 1, 1), u(4))


def test_commutator_of_commuting_pair():
    lat = cf_algebra(surface("sphere4"))
    h = central_elements(surface("sphere4"))["H_c"]
    assert commutator(mono(lat, h), mono(lat, (1, 0, 0, 0, 0, 0))).is_zero()


def test_lattice_validation():
    with pytest.raises(LatticeError):
        SkewLattice(["a", "b"], [[0, 1], [1, 0]])
    with pytest.raises(LatticeError):
        SkewLattice(["a", "a"], [[0, 1], [-1, 0]])
    with pytest.raises(LatticeError):
        SkewLattice(["a"], [[0, 1]])


def test_monomial_length_checked(torus):
    with pytest.raises(LatticeError):
        mono(cf_algebra(torus), (1, 0))


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_cf_form_is_wp(name):
    s = surface(name)
    lat = cf_algebra(s)
    wp = s.wp_matrix()
    n = s.n_edges
    for i in range(n):
        for j in range(n):
            ei, ej = lat.unit_vector(i), lat.unit_vector(j)
            assert lat.form(ei, ej) == wp[i][j]


@pytest.mark.parametrize("name,index", [("triangle", 2), ("torus", 2), ("sphere4", 8)])
def test_balanced_index(name, index):
    # one parity condition per face; the face conditions sum to zero mod 2 when closed
    assert abs(det(balanced_basis(surface(name)))) == index


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_balanced_basis_members(name):
    s = surface(name)
    basis = balanced_basis(s)
    assert len(basis) == s.n_edges
    assert all(is_balanced(s, b) for b in basis)
    lat = balanced_lattice(s)
    for b in basis:
        assert lat.contains(b)


def test_balanced_examples(torus):
    assert is_balanced(torus, (1, 1, 0))
    assert not is_balanced(torus, (1, 0, 0))
    assert balanced_lattice(torus).coordinates((1, 1, 0)) == (1, 1, -1)
    with pytest.raises(LatticeError):
        balanced_lattice(torus).coordinates((1, 0, 0))


@pytest.mark.parametrize("name", ["torus", "triangle"])
def test_equivariant_rank_three(name):
    assert equivariant_torus(build_cover(surface(name))).rank == 3


@pytest.mark.parametrize("name", ["torus", "triangle", "sphere4"])
def test_equivariant_omega_exponents_integral(name):
    lat = equivariant_torus(build_cover(surface(name)))
    for x in lat.basis:
        for y in lat.basis:
            assert lat.form(x, y).denominator == 1


@pytest.mark.parametrize("name", ["torus", "triangle", "sphere4", "twice_punctured_torus"])
def test_weight_transport_has_factor_one(name):
    # the weight bijection is a lattice isometry: form(phi x, phi y) = <x, y>_WP
    s = surface(name)
    cf = cf_algebra(s)
    eq = equivariant_torus(build_cover(s))
    rng = seeded(31)
    for _ in range(100):
        x, y = random_balanced(s, rng), random_balanced(s, rng)
        assert eq.form(phi_leaf(s, x), phi_leaf(s, y)) == cf.form(x, y)


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_weights_round_trip(name):
    s = surface(name)
    rng = seeded(32)
    for _ in range(30):
        k = random_balanced(s, rng)
        w = corner_weights(s, k)
        assert satisfies_switch(s, w)
        assert edge_exponents(s, w) == k
        for lab in (1, 2):
            assert theta_leaf(s, phi_leaf(s, k, lab), lab) == k


def test_corner_weight_example():
    tri = surface("triangle")
    # phi(c_i) = (k_{i-1} + k_{i+1} - k_i)/2 with k = (2, 0, 0) on sides 0, 1, 2
    k = [0, 0, 0]
    k[tri.side_edge[(0, 0)]] = 2
    assert corner_weights(tri, k) == (-1, 1, 1)
    with pytest.raises(LatticeError):
        corner_weights(tri, (1, 0, 0))


def test_second_labeling_negates(torus):
    k = (1, 1, 0)
    assert phi_leaf(torus, k, 2) == tuple(-v for v in phi_leaf(torus, k, 1))


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("name", ["torus", "sphere4"])
def test_frobenius_image_central(name, n):
    s = surface(name)
    lat = cf_algebra(s)
    ctx = RootOfUnityContext(n)
    rng = seeded(n)
    for _ in range(20):
        k = random_balanced(s, rng)
        big = mono(lat, frobenius_j(s, k, n))
        other = mono(lat, random_balanced(s, rng))
        comm = commutator(big, other).evaluate_coefficients(ctx)
        assert all(ctx.is_zero(c) for c in comm.values())


def test_frobenius_rejects():
    t = surface("torus")
    with pytest.raises(LatticeError):
        frobenius_j(t, (1, 0, 0), 3)
    with pytest.raises(ValueError):
        frobenius_j(t, (1, 1, 0), 4)


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_central_elements_commute_with_generators(name):
    s = surface(name)
    lat = cf_algebra(s)
    cen = central_elements(s)
    vecs = list(cen["H_p"].values()) + [cen["H_c"]]
    for v in vecs:
        for i in range(s.n_edges):
            assert lat.form2(v, lat.unit_vector(i)) == 0


def test_h_c_is_product_of_punctures():
    s = surface("sphere4")
    cen = central_elements(s)
    total = [sum(col) for col in zip(*cen["H_p"].values())]
    assert tuple(total) == cen["H_c"]


@settings(max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_i_delta_multiplicative(seed):
    rng = seeded(seed)
    for name in ("torus", "sphere4"):
        s = surface(name)
        lat = cf_algebra(s)
        target = face_sum_lattice(s)
        x, y = (mono(lat, random_balanced(s, rng)) for _ in range(2))
        assert i_delta(s, x * y, target) == i_delta(s, x, target) * i_delta(s, y, target)


def test_i_delta_rejects_unbalanced(torus):
    with pytest.raises(LatticeError):
        i_delta(torus, mono(cf_algebra(torus), (1, 0, 0)))


def test_morita_constants():
    assert bezout_two_prime(3) == (2, -1)
    e2 = SkewLattice(["1", "2", "3"], [[0, 2, -2], [-2, 0, 2], [2, -2, 0]])
    md = morita_embeddings(None, e2, 3)
    assert (md.two_prime, md.k) == (2, -1)
    assert md.phi_vec((1, 1, 1)) == (1, 1, 4)
    assert md.iota((1, 1, 1)) == (1, 1, 2)
    assert md.j_vec((1, 1, 1)) == (1, 1, 2)


def test_morita_rejects_bad_form():
    e2 = SkewLattice(["1", "2"], [[0, 2], [-2, 0]])
    with pytest.raises(LatticeError):
        morita_embeddings(e2, e2, 3)
    with pytest.raises(ValueError):
        morita_embeddings(None, e2, 4)


def test_parse_render_round_trip(torus):
    lat = cf_algebra(torus)
    e = parse_expression(lat, "[Z0^2 Z1^-1] + u^4*[Z2] - (1+u^2)*[]")
    assert e.coefficient((0, 0, 0)) == -(LaurentScalar({0: 1}) + u(2))
    assert parse_expression(lat, render_element(e)) == e


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
                          st.integers(-6, 6), st.integers(-3, 3)), max_size=4))
def test_render_parse_property(terms):
    lat = cf_algebra(surface("torus"))
    el = TorusElement(lat)
    for a, b, c, e, k in terms:
        el = el + mono(lat, (a, b, c), LaurentScalar({e: k}))
    assert parse_expression(lat, render_element(el)) == el


@pytest.mark.parametrize("text", ["", "[Z9]", "[Z0", "Z0", "2*[Z0] +", "[Z0^x]"])
def test_parse_errors(torus, text):
    with pytest.raises(ExpressionError):
        parse_expression(cf_algebra(torus), text)


def test_parse_laurent_fraction():
    assert parse_laurent("1/2*u^3 - u^-1") == LaurentScalar({3: Fraction(1, 2), -1: -1})


@settings(max_examples=60)
@given(seed=st.integers(0, 10**6))
def test_power_matches_repeated_product(seed):
    rng = seeded(seed)
    lat = cf_algebra(surface("sphere4"))
    x = mono(lat, random_vector(lat.dim, rng)) + mono(lat, random_vector(lat.dim, rng))
    assert x ** 3 == x * x * x
