"""Quantum trace state sums and the monomial/weight-vector bijection."""

from __future__ import annotations

from .curves import CurveError, validate_curve
from .qtorus import (LatticeError, TorusElement, balanced_lattice, cf_algebra, corner_weights,
                     edge_exponents, equivariant_torus, is_balanced, satisfies_switch)


def _segment_constraints(comp):
    """(pred, succ) point-index pairs that may not carry (-, +)."""
    n = len(comp.segments)
    out = []
    for i, (_, a, b) in enumerate(comp.segments):
        if comp.closed:
            p_in, p_out = (i - 1) % n, i
        else:
            p_in, p_out = i, i + 1
        if b == (a + 1) % 3:
            out.append((p_in, p_out))
        else:
            out.append((p_out, p_in))
    return out


def component_states(comp):
    """Admissible +-1 assignments to the points of one component."""
    n_pts = len(comp.points())
    cons = _segment_constraints(comp)
    by_last = {}
    for x, y in cons:
        by_last.setdefault(max(x, y), []).append((x, y))
    fixed = {}
    if comp.states is not None:
        fixed[0], fixed[n_pts - 1] = comp.states
    state = [0] * n_pts

    def ok(i):
        for x, y in by_last.get(i, ()):
            if state[x] == -1 and state[y] == 1:
                return False
        return True

    def rec(i):
        if i == n_pts:
            yield tuple(state)
            return
        choices = (fixed[i],) if i in fixed else (1, -1)
        for v in choices:
            state[i] = v
            if ok(i):
                yield from rec(i + 1)
        state[i] = 0

    yield from rec(0)


def admissible_states(s, c):
    """Iterator over admissible states; one tuple of point states per component."""
    validate_curve(s, c)
    comps = c.components

    def rec(i, acc):
        if i == len(comps):
            yield tuple(acc)
            return
        for st in component_states(comps[i]):
            yield from rec(i + 1, acc + [st])

    yield from rec(0, [])


def state_exponent(s, comp, state):
    k = [0] * s.n_edges
    for side, v in zip(comp.point_sides(), state):
        k[s.side_edge[side]] += v
    return tuple(k)


def quantum_trace(s, c, lattice=None):
    """Sum over admissible states of Weyl-ordered monomials, as a CF torus element."""
    validate_curve(s, c)
    lat = lattice or cf_algebra(s)
    out = TorusElement.one(lat)
    for comp in c.components:
        terms = {}
        for st in component_states(comp):
            k = state_exponent(s, comp, st)
            terms[k] = terms.get(k, 0) + 1
        out = out * TorusElement(lat, terms)
    return out


def _sign(labeling):
    if labeling not in (1, 2):
        raise ValueError("leaf labeling must be 1 or 2")
    return 1 if labeling == 1 else -1


def phi_leaf(s, m, labeling=1):
    """Weight vector (3 corners per face) of a balanced monomial."""
    m = tuple(m)
    if not is_balanced(s, m):
        raise LatticeError(f"monomial {m} is not balanced")
    sg = _sign(labeling)
    return tuple(sg * v for v in corner_weights(s, m))


def theta_leaf(s, w, labeling=1):
    """Inverse of phi_leaf."""
    w = tuple(w)
    if not satisfies_switch(s, w):
        raise LatticeError("weight vector violates the switch condition")
    sg = _sign(labeling)
    return edge_exponents(s, tuple(sg * v for v in w))


def phi_map(s, el, target, labeling=1):
    """Apply the bijection termwise to a torus element of the balanced CF algebra."""
    return el.map_exponents(target, lambda k: phi_leaf(s, k, labeling))


def theta_map(s, el, target, labeling=1):
    return el.map_exponents(target, lambda w: theta_leaf(s, w, labeling))


def lifts(s, c, labeling=1):
    """One weight vector per admissible state of ``c`` (repeats kept)."""
    out = []
    for states in admissible_states(s, c):
        k = [0] * s.n_edges
        for comp, st in zip(c.components, states):
            for i, v in enumerate(state_exponent(s, comp, st)):
                k[i] += v
        out.append(phi_leaf(s, k, labeling))
    return out


def gamma_e(cov, e, labeling=1):
    s = cov.base
    if not 0 <= e < s.n_edges:
        raise CurveError(f"unknown edge {e}")
    k = [0] * s.n_edges
    k[e] = 2
    return phi_leaf(s, k, labeling)


__all__ = [
    "admissible_states", "component_states", "quantum_trace", "phi_leaf", "theta_leaf",
    "phi_map", "theta_map", "lifts", "gamma_e", "balanced_lattice", "equivariant_torus",
]
