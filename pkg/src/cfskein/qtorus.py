"""Quantum tori over skew lattices.

A quantum torus has basis ``[x]`` for ``x`` in a lattice with a skew form
``(.,.)`` and product ``[x][y] = omega^{(x,y)} [x+y]``.  Forms may take
half-integer values, so they are stored doubled; then ``omega^{(x,y)}`` is
``u^{form2(x,y)}`` with ``u = omega^{1/2}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import _lattice
from .coeff import LaurentScalar, evaluate_at_root


class LatticeError(ValueError):
    pass


class SkewLattice:
    """Z^n with a skew form given by its doubled integer matrix.

    ``member`` optionally restricts exponent vectors to a sublattice (used
    for weight vectors subject to switch conditions).
    """

    def __init__(self, labels, form2, name=None, member=None, basis=None):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        form2 = tuple(tuple(int(v) for v in row) for row in form2)
        if len(form2) != n or any(len(r) != n for r in form2):
            raise LatticeError("form matrix has the wrong shape")
        for i in range(n):
            for j in range(n):
                if form2[i][j] != -form2[j][i]:
                    raise LatticeError("form is not skew-symmetric")
        if len(set(labels)) != n:
            raise LatticeError("duplicate basis labels")
        self.labels = labels
        self.index = {lab: i for i, lab in enumerate(labels)}
        self.form2_matrix = form2
        self.name = name
        self.member = member
        self._basis = tuple(tuple(b) for b in basis) if basis is not None else None
        self._rows = [[(j, v) for j, v in enumerate(row) if v] for row in form2]

    @property
    def rank(self):
        return len(self.labels) if self._basis is None else len(self._basis)

    @property
    def dim(self):
        """Ambient coordinate count."""
        return len(self.labels)

    @property
    def basis(self):
        if self._basis is not None:
            return self._basis
        n = self.dim
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def zero(self):
        return (0,) * self.dim

    def unit_vector(self, label):
        i = self.index[label] if not isinstance(label, int) else label
        v = [0] * self.dim
        v[i] = 1
        return tuple(v)

    def form2(self, x, y):
        total = 0
        for i, xi in enumerate(x):
            if xi:
                for j, v in self._rows[i]:
                    total += xi * v * y[j]
        return total

    def form(self, x, y):
        return Fraction(self.form2(x, y), 2)

    def contains(self, x):
        if len(x) != self.dim:
            return False
        return self.member is None or self.member(x)

    def coordinates(self, x):
        """Integer coordinates of ``x`` in ``basis``."""
        if self._basis is None:
            return tuple(x)
        c = _lattice.echelon_coordinates(self._echelon[0], x)
        if c is None:
            raise LatticeError(f"{x} is not in the lattice")
        return tuple(sum(ci * t for ci, t in zip(c, col)) for col in zip(*self._echelon[1]))

    @property
    def _echelon(self):
        # echelon form of the chosen basis together with the change of basis
        cached = getattr(self, "_ech_cache", None)
        if cached is None:
            cached = _echelon_with_transform(self._basis)
            self._ech_cache = cached
        return cached

    def __eq__(self, other):
        return (isinstance(other, SkewLattice) and self.labels == other.labels
                and self.form2_matrix == other.form2_matrix)

    def __hash__(self):
        return hash((self.labels, self.form2_matrix))

    def __repr__(self):
        return f"<SkewLattice {self.name or ''} rank={self.rank}>"


def _echelon_with_transform(basis):
    """Echelon rows E of the span of ``basis`` and M with E_i = sum_j M_ij basis_j.

    Coordinates c with respect to E become c @ M with respect to ``basis``.
    """
    n = len(basis)
    aug = [list(b) + [int(i == j) for j in range(n)] for i, b in enumerate(basis)]
    dim = len(basis[0]) if basis else 0
    rows = aug
    out = []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            new = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                (new if r2[col] != 0 else rest).append(r2)
            active = new
        if active:
            out.append(active[0])
        rows = rest
        col += 1
    if len(out) != n:
        raise LatticeError("basis vectors are linearly dependent")
    return [tuple(r[:dim]) for r in out], [tuple(r[dim:]) for r in out]


# ---------------------------------------------------------------------------
# torus elements


class TorusElement:
    """Finite sum of Weyl-ordered monomials with Laurent coefficients."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice, terms=None):
        self.lattice = lattice
        clean = {}
        if terms:
            for x, c in terms.items():
                c = LaurentScalar.coerce(c)
                if not c.is_zero():
                    clean[tuple(x)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, lattice, x, coeff=1):
        x = tuple(x)
        if len(x) != lattice.dim:
            raise LatticeError("exponent vector has the wrong length")
        return cls(lattice, {x: coeff})

    @classmethod
    def one(cls, lattice):
        return cls.monomial(lattice, lattice.zero())

    @classmethod
    def scalar(cls, lattice, c):
        return cls.monomial(lattice, lattice.zero(), c)

    def _check(self, other):
        if not isinstance(other, TorusElement):
            raise TypeError("expected a TorusElement")
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise LatticeError("lattice mismatch")

    def __add__(self, other):
        if isinstance(other, (int, LaurentScalar)):
            other = TorusElement.scalar(self.lattice, other)
        self._check(other)
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out[x] + c if x in out else c
        return TorusElement(self.lattice, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.lattice, {x: -c for x, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = LaurentScalar.coerce(c)
        return TorusElement(self.lattice, {x: c * v for x, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, LaurentScalar)):
            return self.scale(other)
        self._check(other)
        lat = self.lattice
        out = {}
        for x, a in self.terms.items():
            for y, b in other.terms.items():
                z = tuple(i + j for i, j in zip(x, y))
                c = (a * b).shift(lat.form2(x, y))
                out[z] = out[z] + c if z in out else c
        return TorusElement(lat, out)

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            (x, c), = self.terms.items()
            inv = TorusElement(self.lattice, {tuple(-i for i in x): c ** -1})
            return inv ** (-n)
        out = TorusElement.one(self.lattice)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.lattice == other.lattice and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def exponents(self):
        return sorted(self.terms)

    def coefficient(self, x):
        return self.terms.get(tuple(x), LaurentScalar())

    def map_exponents(self, lattice, fn):
        out = {}
        for x, c in self.terms.items():
            y = tuple(fn(x))
            out[y] = out[y] + c if y in out else c
        return TorusElement(lattice, out)

    def at_one(self):
        """Specialize omega = 1: a dict exponent -> rational."""
        out = {}
        for x, c in self.terms.items():
            v = c.at_one()
            if v:
                out[x] = out.get(x, 0) + v
        return {x: v for x, v in out.items() if v}

    def specialize_one(self):
        return TorusElement(self.lattice, {x: LaurentScalar({0: v})
                                           for x, v in self.at_one().items()})

    def evaluate_coefficients(self, ctx):
        return {x: evaluate_at_root(c, ctx) for x, c in self.terms.items()}

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"TorusElement({render_element(self)!r})"


def render_monomial(lattice, x):
    parts = []
    for lab, k in zip(lattice.labels, x):
        if k == 1:
            parts.append(f"Z{lab}")
        elif k:
            parts.append(f"Z{lab}^{k}")
    return "[" + " ".join(parts) + "]"


def render_element(el):
    if not el.terms:
        return "0"
    out = []
    for i, x in enumerate(sorted(el.terms)):
        c = el.terms[x]
        mono = render_monomial(el.lattice, x)
        neg = False
        if c.is_monomial():
            (k, v), = c.items()
            if v < 0:
                neg, c = True, -c
        if c.is_one():
            body = mono
        elif c.is_monomial():
            body = f"{c}*{mono}"
        else:
            body = f"({c})*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def weyl_normalize(lattice, word):
    """Weyl-ordered monomial of a word ``[(generator, exponent), ...]``."""
    x = [0] * lattice.dim
    for gen, k in word:
        i = _gen_index(lattice, gen)
        x[i] += k
    return TorusElement.monomial(lattice, x)


def ordered_product(lattice, word):
    """The plain ordered product Z_{a1}^{k1} Z_{a2}^{k2} ... as a torus element."""
    out = TorusElement.one(lattice)
    for gen, k in word:
        out = out * TorusElement.monomial(lattice, lattice.unit_vector(_gen_index(lattice, gen))) ** k
    return out


def _gen_index(lattice, gen):
    if isinstance(gen, int):
        if not 0 <= gen < lattice.dim:
            raise LatticeError(f"unknown generator {gen}")
        return gen
    if gen not in lattice.index:
        raise LatticeError(f"unknown generator {gen!r}")
    return lattice.index[gen]


def mul(x, y):
    return x * y


def commutator(x, y):
    return x * y - y * x


# ---------------------------------------------------------------------------
# Chekhov-Fock algebras


def cf_algebra(s):
    """Lattice Z^{edges} with (e, e') = <e, e'> (Weil-Petersson)."""
    wp = s.wp_matrix()
    return SkewLattice([str(e.id) for e in s.edges], [[2 * v for v in row] for row in wp],
                       name="CF")


def face_parities(s, k):
    return [sum(k[s.side_edge[(f, j)]] for j in range(3)) % 2 for f in range(s.n_faces)]


def is_balanced(s, k):
    return len(k) == s.n_edges and not any(face_parities(s, k))


def balanced_basis(s):
    """Integer basis of the balanced sublattice, in echelon form."""
    n = s.n_edges
    rows = []
    for f in range(s.n_faces):
        r = [0] * n
        for j in range(3):
            r[s.side_edge[(f, j)]] += 1
        rows.append(r)
    gens = [tuple(2 * int(i == j) for j in range(n)) for i in range(n)]
    gens += _lattice.f2_kernel(rows, n)
    basis = _lattice.echelon_basis(gens)
    assert len(basis) == n
    return basis


def balanced_lattice(s):
    cf = cf_algebra(s)
    return SkewLattice(cf.labels, cf.form2_matrix, name="CF-balanced",
                       member=lambda k: is_balanced(s, k), basis=balanced_basis(s))


def central_elements(s):
    """Exponent vectors of H_p, H_boundary and H_c."""
    return {
        "H_p": {p.id: s.k_puncture(p.id) for p in s.inner_punctures},
        "H_boundary": {b.id: s.k_boundary(b.id) for b in s.boundary_components},
        "H_c": tuple(2 for _ in s.edges),
    }


def frobenius_j(s, k, n):
    if n % 2 == 0 or n <= 1:
        raise ValueError("N must be odd and > 1")
    if not is_balanced(s, k):
        raise LatticeError("frobenius_j needs a balanced monomial")
    return tuple(n * v for v in k)


# -- triangular decomposition ------------------------------------------------


def triangle_lattice():
    """CF lattice of one triangle, sides as generators, successor convention."""
    form = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]
    return SkewLattice(["0", "1", "2"], form, name="triangle")


def face_sum_lattice(s):
    """Direct sum of one triangle lattice per face (coordinates 3f + side)."""
    n = 3 * s.n_faces
    form = [[0] * n for _ in range(n)]
    for f in range(s.n_faces):
        for k in range(3):
            form[3 * f + k][3 * f + (k + 1) % 3] = 2
            form[3 * f + (k + 1) % 3][3 * f + k] = -2
    labels = [f"f{f}s{k}" for f in range(s.n_faces) for k in range(3)]
    return SkewLattice(labels, form, name="faces")


def i_delta_vector(s, k):
    return tuple(k[s.side_edge[(f, j)]] for f in range(s.n_faces) for j in range(3))


def i_delta(s, el, target=None):
    """Triangular decomposition on a torus element of the balanced CF algebra."""
    target = target or face_sum_lattice(s)
    for x in el.terms:
        if not is_balanced(s, x):
            raise LatticeError(f"i_delta needs balanced monomials, got {x}")
    return el.map_exponents(target, lambda x: i_delta_vector(s, x))


def face_factors(s, x):
    """Per-face exponent triples of a face-sum vector."""
    return [tuple(x[3 * f: 3 * f + 3]) for f in range(s.n_faces)]


# -- train-track weights ------------------------------------------------------


def corner_weights(s, k):
    """phi(c_i) = (k_{i-1} + k_{i+1} - k_i) / 2, c_i opposite side i."""
    out = []
    for f in range(s.n_faces):
        kk = [k[s.side_edge[(f, j)]] for j in range(3)]
        for i in range(3):
            twice = kk[(i - 1) % 3] + kk[(i + 1) % 3] - kk[i]
            if twice % 2:
                raise LatticeError(f"face {f} is not balanced")
            out.append(twice // 2)
    return tuple(out)


def side_exponents(s, w):
    """k on each side (f, i): phi(c_{i+1}) + phi(c_{i-1})."""
    return {(f, i): w[3 * f + (i + 1) % 3] + w[3 * f + (i - 1) % 3]
            for f in range(s.n_faces) for i in range(3)}


def switch_defects(s, w):
    sides = side_exponents(s, w)
    return [e.id for e in s.inner_edges if sides[e.sides[0]] != sides[e.sides[1]]]


def satisfies_switch(s, w):
    return len(w) == 3 * s.n_faces and not switch_defects(s, w)


def edge_exponents(s, w):
    if not satisfies_switch(s, w):
        raise LatticeError("weight vector violates the switch condition")
    sides = side_exponents(s, w)
    return tuple(sides[e.sides[0]] for e in s.edges)


EPS_HEX = 1


def equivariant_form2(n_faces):
    n = 3 * n_faces
    form = [[0] * n for _ in range(n)]
    for f in range(n_faces):
        for i in range(3):
            a, b = 3 * f + i, 3 * f + (i + 1) % 3
            form[a][b] += 2 * EPS_HEX
            form[b][a] -= 2 * EPS_HEX
    return form


def equivariant_torus(cov, labeling=1):
    """Lattice of switch-compatible corner weights with the hexagon form.

    The basis is the image of the balanced basis under the bijection to
    weights (negated for the second leaf labeling).
    """
    s = cov.base
    sign = 1 if labeling == 1 else -1
    if labeling not in (1, 2):
        raise ValueError("leaf labeling must be 1 or 2")
    basis = [tuple(sign * v for v in corner_weights(s, b)) for b in balanced_basis(s)]
    labels = [f"f{f}c{i}" for f in range(s.n_faces) for i in range(3)]
    lat = SkewLattice(labels, equivariant_form2(s.n_faces), name=f"equivariant-l{labeling}",
                      member=lambda w: satisfies_switch(s, w), basis=basis)
    lat.basis_labels = tuple(f"w{i}" for i in range(len(basis)))
    return lat


# ---------------------------------------------------------------------------
# Morita embeddings


@dataclass
class MoritaData:
    e1: SkewLattice
    e2: SkewLattice
    special: int
    n: int
    two_prime: int
    k: int

    def iota(self, x):
        y = list(x)
        y[self.special] *= 2
        return tuple(y)

    def j_vec(self, y):
        x = list(y)
        x[self.special] *= self.two_prime
        return tuple(x)

    def phi_vec(self, x):
        z = list(x)
        z[self.special] *= 1 - self.k * self.n
        return tuple(z)

    def i_map(self, el):
        return el.map_exponents(self.e2, self.iota)

    def j_map(self, el):
        return el.map_exponents(self.e1, self.j_vec)

    def phi1(self, el):
        return el.map_exponents(self.e1, self.phi_vec)

    def phi2(self, el):
        return el.map_exponents(self.e2, self.phi_vec)


def bezout_two_prime(n):
    """(2', k) with 2*2' + N*k = 1."""
    return (n + 1) // 2, -1


def morita_embeddings(e1, e2, n, special=None):
    """Embeddings between E1 and E2 where iota doubles one basis vector.

    ``e1`` may be None, in which case its form is pulled back along iota.
    """
    if n % 2 == 0 or n <= 1:
        raise ValueError("N must be odd and > 1")
    special = e2.dim - 1 if special is None else special
    if not 0 <= special < e2.dim:
        raise LatticeError("special index out of range")

    def pulled(i, j):
        a = [0] * e2.dim
        b = [0] * e2.dim
        a[i] = 2 if i == special else 1
        b[j] = 2 if j == special else 1
        return e2.form2(a, b)

    form = [[pulled(i, j) for j in range(e2.dim)] for i in range(e2.dim)]
    if e1 is None:
        e1 = SkewLattice([f"e{i}" for i in range(e2.dim)], form, name="E1")
    elif [list(r) for r in e1.form2_matrix] != form:
        raise LatticeError("iota does not preserve the forms")
    tp, k = bezout_two_prime(n)
    assert 2 * tp + n * k == 1
    return MoritaData(e1, e2, special, n, tp, k)


# ---------------------------------------------------------------------------
# expression parser


class ExpressionError(ValueError):
    pass


def _split_terms(text):
    """Split at top-level + and - (not inside brackets or after '^')."""
    terms, depth, cur, sign = [], 0, [], 1
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ExpressionError(f"unbalanced bracket at column {i + 1}")
        if ch in "+-" and depth == 0 and not (cur and cur[-1] == "^") and (
                i == 0 or text[i - 1] != "^"):
            body = "".join(cur).strip()
            if body:
                terms.append((sign, body, i))
            elif terms or i > 0 and "".join(cur).strip():
                raise ExpressionError(f"dangling operator at column {i + 1}")
            sign = -1 if ch == "-" else 1
            cur = []
            continue
        cur.append(ch)
    if depth:
        raise ExpressionError("unbalanced bracket")
    body = "".join(cur).strip()
    if not body:
        raise ExpressionError("expression ends with an operator")
    terms.append((sign, body, len(text)))
    return terms


def parse_laurent(text):
    """Parse a Laurent polynomial like ``2*u^3 - u^-1 + 4``."""
    text = text.strip()
    if not text:
        return LaurentScalar({0: 1})
    out = LaurentScalar()
    for sign, body, _ in _split_terms(text):
        coeff, exp = Fraction(1), 0
        for factor in body.replace(" ", "").split("*"):
            if factor == "u":
                exp += 1
            elif factor.startswith("u^"):
                try:
                    exp += int(factor[2:])
                except ValueError:
                    raise ExpressionError(f"bad exponent in {factor!r}") from None
            else:
                try:
                    coeff *= Fraction(factor)
                except (ValueError, ZeroDivisionError):
                    raise ExpressionError(f"bad factor {factor!r}") from None
        out = out + LaurentScalar({exp: sign * coeff})
    return out


def parse_monomial(lattice, body):
    x = [0] * lattice.dim
    for tok in body.split():
        m = re.fullmatch(r"Z_?([A-Za-z0-9]+)(?:\^(-?\d+))?", tok)
        if not m:
            raise ExpressionError(f"bad generator token {tok!r}")
        lab, k = m.group(1), int(m.group(2)) if m.group(2) else 1
        if lab not in lattice.index:
            raise ExpressionError(f"unknown generator Z{lab}")
        x[lattice.index[lab]] += k
    return tuple(x)


def parse_expression(lattice, text):
    """Parse ``[Z0^2 Z1^-1] + u^4*[Z2] - (1+u^2)*[]`` into a TorusElement."""
    if not text.strip():
        raise ExpressionError("empty expression")
    out = TorusElement(lattice)
    if text.strip() == "0":
        return out
    for sign, body, col in _split_terms(text):
        if not body.endswith("]") or "[" not in body:
            raise ExpressionError(f"term {body!r} (before column {col + 1}) has no [monomial]")
        cut = body.rindex("[")
        coeff_text = body[:cut].strip()
        if coeff_text.endswith("*"):
            coeff_text = coeff_text[:-1].strip()
        if coeff_text.startswith("(") and coeff_text.endswith(")"):
            coeff_text = coeff_text[1:-1]
        coeff = parse_laurent(coeff_text) if coeff_text else LaurentScalar({0: 1})
        x = parse_monomial(lattice, body[cut + 1:-1])
        out = out + TorusElement.monomial(lattice, x, coeff * sign)
    return out
