from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SURFACE_NAMES, surface
from cfskein.curves import (CurveError, curve, dump_curve, edge_crossings, intersection_form,
                            load_curves, normal_to_curve, peripheral_curve, validate_curve)


def test_torus_file_normal_coordinates(torus, torus_curves):
    expected = {"a": (1, 1, 0), "b": (0, 1, 1), "ab": (1, 2, 1), "ab_inv": (1, 0, 1)}
    for name, nc in expected.items():
        assert edge_crossings(torus, torus_curves[name]) == nc


def test_all_file_curves_validate(torus, torus_curves):
    for c in torus_curves.values():
        validate_curve(torus, c)


@pytest.mark.parametrize("segs", [[(0, 0, 1), (1, 2, 0)], [(0, 1, 1), (1, 1, 0)], [(5, 0, 1)]])
def test_validate_rejects(torus, segs):
    with pytest.raises(CurveError):
        validate_curve(torus, curve(segs))


def test_arc_must_end_on_boundary(torus):
    with pytest.raises(CurveError):
        validate_curve(torus, curve([(0, 0, 1)], closed=False))


def test_arc_in_triangle_is_valid():
    validate_curve(surface("triangle"), curve([(0, 0, 1)], closed=False, states=(1, -1)))


def test_normal_coordinate_errors():
    tri = surface("triangle")
    with pytest.raises(CurveError, match="triangle inequality"):
        normal_to_curve(tri, (1, 1, 3))
    with pytest.raises(CurveError, match="odd"):
        normal_to_curve(surface("torus"), (1, 1, 1))
    with pytest.raises(CurveError):
        normal_to_curve(tri, (1, -1, 0))


def test_parallel_copies_split(torus):
    mc = normal_to_curve(torus, (2, 2, 0))
    assert len(mc.components) == 2
    assert mc.components[0].segments == mc.components[1].segments


@settings(max_examples=80)
@given(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)))
def test_normal_round_trip_torus(nc):
    s = surface("torus")
    try:
        mc = normal_to_curve(s, nc)
    except CurveError:
        return
    validate_curve(s, mc)
    assert edge_crossings(s, mc) == nc


@settings(max_examples=60)
@given(st.data())
def test_normal_round_trip_sphere4(data):
    s = surface("sphere4")
    nc = tuple(data.draw(st.integers(0, 3)) for _ in range(s.n_edges))
    try:
        mc = normal_to_curve(s, nc)
    except CurveError:
        return
    assert edge_crossings(s, mc) == nc


def test_torus_intersections(torus, torus_curves):
    c = torus_curves
    # simple closed curves on a torus with slopes (p,q),(r,s) meet |ps - qr| times
    assert abs(intersection_form(torus, c["a"], c["b"])) == 1
    assert abs(intersection_form(torus, c["a"], c["ab"])) == 1
    assert abs(intersection_form(torus, c["ab"], c["ab_inv"])) == 2


def test_intersection_skew_and_orientation(torus, torus_curves):
    a, b = torus_curves["a"], torus_curves["b"]
    assert intersection_form(torus, a, b) == -intersection_form(torus, b, a)
    assert intersection_form(torus, a.with_orientation(-1), b) == -intersection_form(torus, a, b)
    assert intersection_form(torus, a, a) == 0


def test_triangle_arcs_half_integer():
    tri = surface("triangle")
    x, y, z = (curve([seg], closed=False) for seg in [(0, 0, 1), (0, 0, 2), (0, 1, 2)])
    for p, q in [(x, y), (x, z), (y, z)]:
        v = intersection_form(tri, p, q)
        assert abs(v) == Fraction(1, 2)
        assert intersection_form(tri, q, p) == -v


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_peripheral_lengths_match_corner_count(name):
    s = surface(name)
    for p in s.punctures:
        c = peripheral_curve(s, p.id)
        assert len(c) == len(p.corners)
        if p.inner:
            validate_curve(s, c)


def test_peripheral_examples():
    assert len(peripheral_curve(surface("torus"), 0)) == 6
    assert all(len(peripheral_curve(surface("sphere3"), p)) == 2 for p in range(3))


def test_peripheral_crossings_sum_to_corners(torus):
    assert edge_crossings(torus, peripheral_curve(torus, 0)) == (2, 2, 2)


def test_dump_load_round_trip(torus_curves):
    for name, c in torus_curves.items():
        again = load_curves(dump_curve(c))[name]
        assert again == c
    arc = curve([(0, 0, 1)], closed=False, orient=-1, states=(1, -1), name="s")
    assert load_curves(dump_curve(arc))["s"] == arc


@pytest.mark.parametrize("text,line", [
    ("seg 0 0 1\n", 1),
    ("curve a closed\nseg 0 0\n", 2),
    ("curve a closed\nseg 0 0 1\ncurve a closed\nseg 0 0 1\n", 3),
    ("curve a wiggly\n", 1),
    ("curve a closed\nseg 0 0 1\nstates + -\n", 3),
])
def test_parse_errors_carry_lines(text, line):
    with pytest.raises(CurveError) as err:
        load_curves(text)
    assert err.value.line == line


def test_rotation_invariance_of_crossings(torus, torus_curves):
    c = torus_curves["ab"]
    assert all(edge_crossings(torus, c.rotate(k)) == edge_crossings(torus, c) for k in range(4))
    with pytest.raises(CurveError):
        curve([(0, 0, 1)], closed=False).rotate(1)
