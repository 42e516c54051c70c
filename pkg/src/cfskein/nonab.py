"""Non-abelianization at omega = +1.

Curve functions are evaluated as signed sums of abelian holonomies of
their lifts to the branched double cover.  Characters of the equivariant
weight lattice are stored by their values on the lattice basis.
"""

from __future__ import annotations

import cmath
import json
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _lattice
from .coeff import LaurentScalar, first_order
from .curves import CurveError, edge_crossings, intersection_form, validate_curve
from .qtorus import LatticeError, TorusElement, equivariant_torus
from .qtrace import gamma_e, lifts
from .surface import z2_cycle_basis


class NonAbelianError(ValueError):
    pass


# ---------------------------------------------------------------------------
# spin structures


def _class_coords(basis, c):
    """Z/2 homology coordinates of a closed curve."""
    for comp in c.components:
        if not comp.closed:
            raise CurveError("homology classes need closed curves")
    return basis.coordinates(edge_crossings(basis.surface, c))


@dataclass
class SpinForm:
    """Quadratic refinement of the mod 2 intersection form.

    ``values[i]`` is w(h_i) on the cycle basis; other classes are computed
    by w(a + b) = w(a) + w(b) + a.b.
    """

    basis: object
    values: tuple

    def __post_init__(self):
        self.values = tuple(int(v) % 2 for v in self.values)
        if len(self.values) != self.basis.rank:
            raise NonAbelianError(f"spin form needs {self.basis.rank} values")
        self._pairing = _basis_pairing(self.basis)

    def of_coords(self, coords):
        total = sum(c * v for c, v in zip(coords, self.values))
        idx = [i for i, c in enumerate(coords) if c]
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                total += self._pairing[idx[a]][idx[b]]
        return total % 2

    def __call__(self, c):
        return self.of_coords(_class_coords(self.basis, c))

    def peripheral_defects(self):
        return [pid for pid, c in self.basis.peripheral.items() if self(c)]

    def validate(self):
        bad = self.peripheral_defects()
        if bad:
            raise NonAbelianError(f"spin form is nonzero on peripheral curves {bad}")
        return True

    @classmethod
    def default(cls, s, basis=None):
        """Zero on free basis directions, solving w(gamma_p) = 0 for every puncture."""
        basis = basis or z2_cycle_basis(s)
        pairing = _basis_pairing(basis)
        rows, rhs = [], []
        for c in basis.peripheral.values():
            co = _class_coords(basis, c)
            idx = [i for i, x in enumerate(co) if x]
            quad = sum(pairing[idx[a]][idx[b]] for a in range(len(idx))
                       for b in range(a + 1, len(idx))) % 2
            rows.append(co)
            rhs.append(quad)
        if rows:
            cols = [tuple(r[i] for r in rows) for i in range(basis.rank)]
            sol = _lattice.f2_solve(cols, rhs)
            if sol is None:
                raise NonAbelianError("no spin form vanishes on all peripheral curves")
        else:
            sol = (0,) * basis.rank
        return cls(basis, sol)

    def to_json(self):
        return json.dumps(dict(zip(self.basis.labels, self.values)), sort_keys=True)

    @classmethod
    def from_json(cls, basis, text):
        doc = json.loads(text)
        missing = [lab for lab in basis.labels if lab not in doc]
        if missing:
            raise NonAbelianError(f"spin file lacks values for {missing}")
        return cls(basis, tuple(int(doc[lab]) for lab in basis.labels))


def _basis_pairing(basis):
    cached = getattr(basis, "_pairing_cache", None)
    if cached is None:
        s = basis.surface
        n = basis.rank
        cached = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = int(intersection_form(s, basis.curves[i], basis.curves[j])) % 2
                cached[i][j] = cached[j][i] = v
        # the basis may be a frozen dataclass
        object.__setattr__(basis, "_pairing_cache", cached)
    return cached


# ---------------------------------------------------------------------------
# abelian characters


class AbelianCharacter:
    """Multiplicative map on a weight lattice, fixed by values on its basis."""

    def __init__(self, lattice, values):
        self.lattice = lattice
        labels = _basis_labels(lattice)
        if isinstance(values, dict):
            missing = [lab for lab in labels if lab not in values]
            if missing:
                raise NonAbelianError(f"character lacks values for {missing}")
            values = [values[lab] for lab in labels]
        values = tuple(complex(v) for v in values)
        if len(values) != len(labels):
            raise NonAbelianError(f"character needs {len(labels)} values")
        if any(v == 0 for v in values):
            raise NonAbelianError("character values must be nonzero")
        self.values = values

    def __call__(self, w):
        coords = self.lattice.coordinates(tuple(w))
        out = 1 + 0j
        for v, c in zip(self.values, coords):
            if c:
                out *= v ** c
        return out

    def __mul__(self, other):
        return AbelianCharacter(self.lattice, [a * b for a, b in zip(self.values, other.values)])

    @classmethod
    def trivial(cls, lattice):
        return cls(lattice, [1] * lattice.rank)

    @classmethod
    def random(cls, lattice, rng=None, spread=0.5):
        rng = rng or random.Random(0)
        return cls(lattice, [cmath.exp(complex(rng.gauss(0, spread), rng.uniform(-3, 3)))
                             for _ in range(lattice.rank)])

    def to_json(self):
        return json.dumps({lab: [v.real, v.imag] for lab, v in
                           zip(_basis_labels(self.lattice), self.values)}, sort_keys=True)

    @classmethod
    def from_json(cls, lattice, text):
        doc = json.loads(text)
        vals = {}
        for k, v in doc.items():
            if isinstance(v, (list, tuple)):
                vals[k] = complex(float(Fraction(str(v[0]))), float(Fraction(str(v[1]))))
            else:
                vals[k] = complex(float(Fraction(str(v))))
        return cls(lattice, vals)


def _basis_labels(lattice):
    return getattr(lattice, "basis_labels", None) or tuple(f"w{i}" for i in range(lattice.rank))


# ---------------------------------------------------------------------------
# curve functions


def na_star(cov, c, spin, labeling=1, lattice=None):
    """Signed sum over the lifts of ``c`` as an element of the equivariant torus at omega = 1."""
    s = cov.base
    validate_curve(s, c)
    if any(not comp.closed for comp in c.components):
        raise CurveError("non-abelianization is defined for closed curves")
    lat = lattice or equivariant_torus(cov, labeling)
    sign = -1 if spin(c) else 1
    terms = {}
    for w in lifts(s, c, labeling):
        terms[w] = terms.get(w, 0) + sign
    return TorusElement(lat, terms)


def evaluate(x, rho):
    """Sum of coefficients times character values, with omega specialized to 1."""
    total = 0j
    for w, c in x.at_one().items():
        total += complex(c) * rho(w)
    return total


def curve_function(cov, c, spin, rho, labeling=1):
    """The trace function t_c = (-1)^{w(c)} evaluate(na_star(c), rho)."""
    x = na_star(cov, c, spin, labeling, rho.lattice)
    sign = -1 if spin(c) else 1
    return sign * evaluate(x, rho)


def shear_bend(cov, e, rho, labeling=1):
    return rho(gamma_e(cov, e, labeling))


# ---------------------------------------------------------------------------
# H^1(Sigma; Z/2) action


def projection_class(basis, w, labeling=1):
    """Z/2 homology coordinates of the projection of a lifted class."""
    from .qtrace import theta_leaf

    s = basis.surface
    if s.boundary_components:
        raise NonAbelianError("the Z/2 action is implemented for surfaces without boundary")
    k = theta_leaf(s, w, labeling)
    return basis.coordinates(k)


def h1_action(chi, rho, basis, labeling=1):
    """(rho . chi)(w) = (-1)^{chi(pi(w))} rho(w), defined on the lattice basis."""
    chi = tuple(int(x) % 2 for x in chi)
    if len(chi) != basis.rank:
        raise NonAbelianError(f"cocycle needs {basis.rank} values")
    vals = []
    for w, v in zip(rho.lattice.basis, rho.values):
        coords = projection_class(basis, w, labeling)
        sign = -1 if sum(a * b for a, b in zip(chi, coords)) % 2 else 1
        vals.append(sign * v)
    return AbelianCharacter(rho.lattice, vals)


def projection_rank(basis, lattice, labeling=1):
    """Rank over Z/2 of the projections of the lattice basis (freeness of the action)."""
    return _lattice.f2_rank([projection_class(basis, w, labeling) for w in lattice.basis])


# ---------------------------------------------------------------------------
# Poisson bracket


def poisson_bracket(x, y, method="formula"):
    """Bracket at omega = 1 with {[a], [b]} = -1/2 (a, b) [a + b]."""
    if x.lattice != y.lattice:
        raise LatticeError("lattice mismatch")
    lat = x.lattice
    if method == "formula":
        out = {}
        for a, ca in x.at_one().items():
            for b, cb in y.at_one().items():
                f = lat.form(a, b)
                if f:
                    z = tuple(i + j for i, j in zip(a, b))
                    out[z] = out.get(z, 0) - Fraction(ca) * Fraction(cb) * f / 2
        return TorusElement(lat, {z: LaurentScalar({0: v}) for z, v in out.items() if v})
    if method == "commutator":
        comm = x * y - y * x
        out = {}
        for z, c in comm.terms.items():
            d = first_order(c)
            if d.value:
                raise ArithmeticError("commutator does not vanish at omega = 1")
            if d.deriv:
                out[z] = LaurentScalar({0: d.deriv})
        return TorusElement(lat, out)
    raise ValueError(f"unknown method {method!r}")


def classical_product(x, y):
    """Commutative product at omega = 1."""
    return (x.specialize_one() * y.specialize_one()).specialize_one()


# ---------------------------------------------------------------------------
# relative colorings


@dataclass
class PunctureColoring:
    """c on inner punctures and a lift chat on (puncture, leaf) pairs, leaves 1 and 2."""

    c: dict
    chat: dict

    def __post_init__(self):
        for pid, val in self.c.items():
            a, b = self.chat.get((pid, 1)), self.chat.get((pid, 2))
            if a is None or b is None:
                raise NonAbelianError(f"puncture {pid} lacks lifted values")
            if a == 0 or b == 0:
                raise NonAbelianError("lifted values must be nonzero")
            if abs(a + b - val) > 1e-9 * max(1.0, abs(val)):
                raise NonAbelianError(f"chat does not lift c at puncture {pid}")

    @property
    def generic(self):
        return all(abs(v - 2) > 1e-12 and abs(v + 2) > 1e-12 for v in self.c.values())

    @classmethod
    def from_c(cls, c):
        """Lift with chat(p1) chat(p2) = 1, chat(p1) the root of larger modulus."""
        chat = {}
        for pid, val in c.items():
            val = complex(val)
            disc = cmath.sqrt(val * val - 4)
            lam = (val + disc) / 2
            if abs(lam) < 1:
                lam = (val - disc) / 2
            chat[(pid, 1)], chat[(pid, 2)] = lam, 1 / lam
        return cls({p: complex(v) for p, v in c.items()}, chat)


def peripheral_lifts(cov, labeling=1):
    """Weights of the two lifts of each inner peripheral curve (leaf 1: all plus)."""
    s = cov.base
    basis = z2_cycle_basis(s)
    out = {}
    for pid, c in basis.peripheral.items():
        ws = lifts(s, c, labeling)
        plus = [w for w in ws if sum(w) > 0]
        minus = [w for w in ws if sum(w) < 0]
        if len(plus) != 1 or len(minus) != 1:
            raise NonAbelianError(f"peripheral curve at {pid} does not have two lifts")
        out[(pid, 1)], out[(pid, 2)] = plus[0], minus[0]
    return out


def relative_check(cov, rho, col, labeling=1, tol=1e-9):
    for key, w in peripheral_lifts(cov, labeling).items():
        target = col.chat[key]
        if abs(rho(w) - target) > tol * max(1.0, abs(target)):
            return False
    return True


def character_from_coloring(cov, col, labeling=1, lattice=None, rng=None):
    """A character whose peripheral lifts take the values of ``col``.

    Log-values on the basis solve a linear system; free directions get
    random values.
    """
    lat = lattice or equivariant_torus(cov, labeling)
    rng = rng or random.Random(0)
    per = peripheral_lifts(cov, labeling)
    keys = sorted(per)
    rows = np.array([lat.coordinates(per[k]) for k in keys], dtype=float).reshape(len(keys), -1)
    rhs = np.array([cmath.log(col.chat[k]) for k in keys], dtype=complex)
    base = np.array([complex(rng.gauss(0, 0.3), rng.uniform(-1, 1)) for _ in range(lat.rank)])
    if keys:
        # minimal correction of random log-values to satisfy the constraints
        resid = rhs - rows @ base
        corr, *_ = np.linalg.lstsq(rows.astype(complex), resid, rcond=None)
        base = base + corr
    rho = AbelianCharacter(lat, [cmath.exp(x) for x in base])
    if not relative_check(cov, rho, col, labeling, tol=1e-8):
        raise NonAbelianError("coloring is inconsistent with the lattice relations")
    return rho


__all__ = [
    "NonAbelianError", "SpinForm", "AbelianCharacter", "PunctureColoring", "na_star", "evaluate",
    "curve_function", "shear_bend", "h1_action", "projection_class", "projection_rank",
    "poisson_bracket", "classical_product", "peripheral_lifts", "relative_check",
    "character_from_coloring",
]
