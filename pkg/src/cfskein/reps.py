"""Representations at odd roots of unity.

Every representation built here is monomial: each generator matrix sends a
basis vector to a multiple of another basis vector.  Products, inverses,
tensor products and direct sums stay monomial, and the commutant of a
family of monomial matrices can be computed exactly from the permutation
action on matrix positions.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coeff import RootOfUnityContext
from .qtorus import (SkewLattice, balanced_basis, central_elements, cf_algebra,
                     face_factors, i_delta_vector, is_balanced, triangle_lattice)
from .surface import cover_genus, d_boundary


class RepresentationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomial matrices


class MonomialMatrix:
    """M e_i = coeffs[i] e_{perm[i]}."""

    __slots__ = ("ctx", "perm", "coeffs")

    def __init__(self, ctx, perm, coeffs):
        self.ctx = ctx
        self.perm = tuple(perm)
        self.coeffs = tuple(coeffs)

    @classmethod
    def identity(cls, ctx, n, scalar=None):
        c = ctx.one if scalar is None else ctx.coerce(scalar)
        return cls(ctx, range(n), [c] * n)

    @classmethod
    def diagonal(cls, ctx, values):
        return cls(ctx, range(len(values)), values)

    @classmethod
    def shift(cls, ctx, n, wrap=None):
        """e_j -> e_{j+1}, with e_{n-1} -> wrap * e_0."""
        w = ctx.one if wrap is None else ctx.coerce(wrap)
        return cls(ctx, [(j + 1) % n for j in range(n)], [ctx.one] * (n - 1) + [w])

    @property
    def dim(self):
        return len(self.perm)

    def __matmul__(self, other):
        # (A B) e_i = b_i a_{pB(i)} e_{pA(pB(i))}
        pa, ca = self.perm, self.coeffs
        return MonomialMatrix(self.ctx, [pa[j] for j in other.perm],
                              [b * ca[j] for j, b in zip(other.perm, other.coeffs)])

    def scale(self, c):
        return MonomialMatrix(self.ctx, self.perm, [x * c for x in self.coeffs])

    def inverse(self):
        n = self.dim
        perm = [0] * n
        coeffs = [None] * n
        for i, (j, c) in enumerate(zip(self.perm, self.coeffs)):
            perm[j] = i
            coeffs[j] = 1 / c
        return MonomialMatrix(self.ctx, perm, coeffs)

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = MonomialMatrix.identity(self.ctx, self.dim)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def kron(self, other):
        db = other.dim
        perm, coeffs = [], []
        for i in range(self.dim):
            for j in range(db):
                perm.append(self.perm[i] * db + other.perm[j])
                coeffs.append(self.coeffs[i] * other.coeffs[j])
        return MonomialMatrix(self.ctx, perm, coeffs)

    def direct_sum(self, other):
        n = self.dim
        return MonomialMatrix(self.ctx, list(self.perm) + [n + p for p in other.perm],
                              list(self.coeffs) + list(other.coeffs))

    def restrict(self, indices):
        pos = {x: i for i, x in enumerate(indices)}
        perm, coeffs = [], []
        for x in indices:
            y = self.perm[x]
            if y not in pos:
                raise RepresentationError("subspace is not invariant")
            perm.append(pos[y])
            coeffs.append(self.coeffs[x])
        return MonomialMatrix(self.ctx, perm, coeffs)

    def scalar_value(self):
        """The scalar if this is c * Id, else None."""
        if any(p != i for i, p in enumerate(self.perm)):
            return None
        c0 = self.coeffs[0]
        if all(self.ctx.eq(c, c0) for c in self.coeffs):
            return c0
        return None

    def equals(self, other):
        return self.perm == other.perm and all(self.ctx.eq(a, b)
                                               for a, b in zip(self.coeffs, other.coeffs))

    def to_dense(self):
        """Dense complex numpy array."""
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for i, (j, c) in enumerate(zip(self.perm, self.coeffs)):
            m[j, i] = complex(c)
        return m

    def entries(self):
        """Row-major dense entries in the native field."""
        n = self.dim
        rows = [[self.ctx.zero] * n for _ in range(n)]
        for i, (j, c) in enumerate(zip(self.perm, self.coeffs)):
            rows[j][i] = c
        return rows

    def cycles(self):
        seen = [False] * self.dim
        out = []
        for i in range(self.dim):
            if not seen[i]:
                cyc = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j)
                    j = self.perm[j]
                out.append(cyc)
        return out


# ---------------------------------------------------------------------------
# representations


@dataclass
class Representation:
    """Generator matrices with the commutation data they must satisfy.

    ``commutation[(a, b)] = k`` records the defining relation
    ``G_a G_b = u^k G_b G_a``.  ``central`` lists central elements used for
    central characters and decomposition.  ``action`` maps lattice vectors
    to matrices when the representation is of a quantum torus.
    """

    ctx: RootOfUnityContext
    generators: dict
    commutation: dict
    central: dict = field(default_factory=dict)
    action: object = None
    lattice: SkewLattice | None = None
    kind: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return next(iter(self.generators.values())).dim

    def relation_failures(self):
        bad = []
        for (a, b), k in self.commutation.items():
            ga, gb = self.generators[a], self.generators[b]
            if not (ga @ gb).equals((gb @ ga).scale(self.ctx.u_power(k))):
                bad.append((a, b))
        for name, g in self.generators.items():
            if any(self.ctx.is_zero(c) for c in g.coeffs):
                bad.append((name, "singular"))
        return bad

    def verify(self):
        bad = self.relation_failures()
        if bad:
            raise RepresentationError(f"relations fail for {bad}")
        return True


def _nth_root_exact(ctx, z, n):
    """An n-th root of a rational times a power of zeta, inside Q(zeta_N)."""
    z = ctx.coerce(z)
    for k in range(ctx.n):
        r = (z * ctx.zeta(-k)).rational_value()
        if r is not None:
            break
    else:
        raise RepresentationError(f"{z!r} is not a rational multiple of a root of unity")
    root = _rational_root(r, n)
    g = math.gcd(n, ctx.n)
    if k % g:
        raise RepresentationError(f"zeta^{k} has no {n}-th root in Q(zeta_{ctx.n})")
    m = ((k // g) * pow(n // g, -1, ctx.n // g)) % (ctx.n // g) if ctx.n // g > 1 else 0
    out = ctx.zeta(m) * root
    assert out ** n == z
    return out


def _rational_root(r, n):
    r = Fraction(r)
    if r == 0:
        raise RepresentationError("zero has no invertible root")
    sign = 1
    if r < 0:
        if n % 2 == 0:
            raise RepresentationError(f"negative {r} has no real {n}-th root")
        sign, r = -1, -r
    num, den = _int_root(r.numerator, n), _int_root(r.denominator, n)
    if num is None or den is None:
        raise RepresentationError(f"{r} is not a perfect {n}-th power; pass roots directly")
    return sign * Fraction(num, den)


def _int_root(x, n):
    r = round(x ** (1.0 / n))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** n == x:
            return c
    return None


def nth_root(ctx, z, n=None):
    n = ctx.n if n is None else n
    if ctx.exact:
        return _nth_root_exact(ctx, z, n)
    z = complex(z)
    if z == 0:
        raise RepresentationError("zero parameter")
    return cmath.rect(abs(z) ** (1.0 / n), cmath.phase(z) / n)


def _param(ctx, value, root, name):
    """Resolve a generator scale from either its N-th power or the root itself."""
    if root is not None:
        v = ctx.coerce(root)
    elif value is not None:
        v = nth_root(ctx, value)
    else:
        v = ctx.one
    if ctx.is_zero(v):
        raise RepresentationError(f"parameter {name} must be nonzero")
    return v


def _q_exp(k):
    """u-exponent of q^k (q = omega^-4 = u^-8)."""
    return -8 * k


def irrep_w(ctx, variant="q", z1=None, z2=None, alpha=None, beta=None):
    """Clock-and-shift simple module of Z1 Z2 = q^s Z2 Z1, s = 1 or 2."""
    s = {"q": 1, "q2": 2, "q^2": 2}.get(variant)
    if s is None:
        raise RepresentationError(f"unknown variant {variant!r}")
    n = ctx.n
    a = _param(ctx, z1, alpha, "z1")
    b = _param(ctx, z2, beta, "z2")
    clock = MonomialMatrix.diagonal(ctx, [ctx.q_power(s * j) for j in range(n)]).scale(a)
    shift = MonomialMatrix.shift(ctx, n).scale(b)
    gens = {"Z1": clock, "Z2": shift}
    rep = Representation(ctx, gens, {("Z1", "Z2"): _q_exp(s)}, kind=f"W_{variant}")
    rep.central = {"Z1^N": clock ** n, "Z2^N": shift ** n}
    return rep


def d_of(n):
    return (n - 1) // 2 if n % 2 else n // 2


def y_commutation(n):
    """Defining relations of Y^(n) as q-exponents A with G_a G_b = q^A G_b G_a."""
    if n < 1:
        raise RepresentationError("n must be at least 1")
    rel = {}

    def add(a, b, k):
        if k:
            rel[(a, b)] = rel.get((a, b), 0) + k
            rel[(b, a)] = rel.get((b, a), 0) - k

    if n % 2:
        labels = [f"Z{i}" for i in range(n)]
        if n > 1:
            for i in range(n):
                add(f"Z{i}", f"Z{(i + 1) % n}", 1)
    else:
        labels = ["Zb"] + [f"Z{i}" for i in range(1, n + 1)]
        for i in range(1, n + 1):
            add(f"Z{i}", f"Z{i % n + 1}", 1)
        add("Zb", "Z1", 2)
        add("Zb", f"Z{n}", -2)
    rel = {k: v for k, v in rel.items() if v}
    return labels, rel


def irrep_y(ctx, n, lam=None, z=None, h=1, z_roots=None):
    """Simple module of Y^(n) of dimension N^{d(n)}.

    Odd n: generators Z0..Z{n-1} with Z_i Z_{i+1} = q Z_{i+1} Z_i cyclically;
    shifts on Z0, Z2, ..., Z{n-3}; diagonal Z1, Z3, ..., Z{n-2}; Z{n-1} is
    fixed by H = Z1 Z2 ... Z{n-1} Z0 = h.
    Even n: generators Zb, Z1..Zn (Z0 = Zn); shifts on Zb, Z2, ..., Z{n-2};
    diagonal Z1, Z3, ..., Z{n-1}; Zn fixed by H = Z1 ... Zn = h.

    ``lam`` are the diagonal seeds (one per diagonal generator), ``z`` the
    N-th powers of the shift generators (or ``z_roots`` their roots).
    """
    N = ctx.n
    labels, rel = y_commutation(n)
    hval = ctx.coerce(h)
    if ctx.is_zero(hval):
        raise RepresentationError("h must be nonzero")
    if n == 1:
        g = MonomialMatrix.identity(ctx, 1, hval)
        rep = Representation(ctx, {"Z0": g}, {}, kind="Y1")
        rep.central = {"H": g}
        rep.meta["word_H"] = ["Z0"]
        return rep
    if n % 2:
        shifts = [f"Z{2 * k}" for k in range((n - 1) // 2)]
        diag = [f"Z{2 * k + 1}" for k in range((n - 1) // 2)]
        last = f"Z{n - 1}"
        order_h = [f"Z{i}" for i in range(1, n)] + ["Z0"]
    else:
        shifts = ["Zb"] + [f"Z{2 * k}" for k in range(1, n // 2)]
        diag = [f"Z{2 * k + 1}" for k in range(n // 2)]
        last = f"Z{n}"
        order_h = [f"Z{i}" for i in range(1, n + 1)]
    d = len(shifts)
    assert d == d_of(n)
    lam = [ctx.one] * len(diag) if lam is None else [ctx.coerce(x) for x in lam]
    if len(lam) != len(diag) or any(ctx.is_zero(x) for x in lam):
        raise RepresentationError(f"need {len(diag)} nonzero diagonal seeds")
    if z_roots is not None:
        roots = [ctx.coerce(x) for x in z_roots]
    else:
        zs = [ctx.one] * d if z is None else list(z)
        roots = [nth_root(ctx, x) for x in zs]
    if len(roots) != d or any(ctx.is_zero(x) for x in roots):
        raise RepresentationError(f"need {d} nonzero shift parameters")

    dim = N ** d
    idx = _tuple_indexer(N, d)
    pos = {name: i for i, name in enumerate(shifts)}
    gens = {}
    for name, r in zip(shifts, roots):
        gens[name] = _shift_on(ctx, N, d, pos[name], r)
    for name, l in zip(diag, lam):
        num = int(name[1:])
        vals = []
        for t in idx:
            k = 0
            if n % 2:
                right, left = f"Z{num + 1}", f"Z{num - 1}"
                if right in pos:
                    k += t[pos[right]]
                if left in pos:
                    k -= t[pos[left]]
            else:
                right, left = f"Z{num + 1}", f"Z{num - 1}"
                if right in pos:
                    k += t[pos[right]]
                if num == 1:
                    k -= 2 * t[pos["Zb"]]
                elif left in pos:
                    k -= t[pos[left]]
            vals.append(ctx.q_power(k) * l)
        gens[name] = MonomialMatrix.diagonal(ctx, vals)
    # the last generator is fixed by the value of H
    prod = MonomialMatrix.identity(ctx, dim)
    before = order_h[: order_h.index(last)]
    after = order_h[order_h.index(last) + 1:]
    for g in before:
        prod = prod @ gens[g]
    tail = MonomialMatrix.identity(ctx, dim)
    for g in after:
        tail = tail @ gens[g]
    gens[last] = prod.inverse() @ tail.inverse().scale(hval)
    gens = {k: gens[k] for k in labels}
    comm = {k: _q_exp(v) for k, v in rel.items()}
    rep = Representation(ctx, gens, comm, kind=f"Y{n}")
    hmat = MonomialMatrix.identity(ctx, dim)
    for g in order_h:
        hmat = hmat @ gens[g]
    rep.central = {f"{g}^N": gens[g] ** N for g in labels}
    rep.central["H"] = hmat
    rep.meta.update({"shifts": shifts, "diag": diag, "word_H": order_h, "n": n})
    return rep


def _tuple_indexer(N, d):
    out = []
    for i in range(N ** d):
        t = []
        x = i
        for _ in range(d):
            t.append(x % N)
            x //= N
        out.append(tuple(reversed(t)))
    return out


def _shift_on(ctx, N, d, p, root):
    """root times the cyclic shift of index p of (i_0, ..., i_{d-1})."""
    idx = _tuple_indexer(N, d)
    lookup = {t: i for i, t in enumerate(idx)}
    perm = []
    for t in idx:
        t2 = list(t)
        t2[p] = (t[p] + 1) % N
        perm.append(lookup[tuple(t2)])
    return MonomialMatrix(ctx, perm, [root] * len(idx))


def y_intertwiner(rep_a, rep_b, start=0):
    """Map T with T rep_a(g) = rep_b(g) T, sending the cyclic vector w_0 to w_start.

    Basis vector w_i of rep_a is (product of shift generators) w_0; T sends it
    to the same product applied to w_start in rep_b.
    """
    ctx = rep_a.ctx
    shifts = rep_a.meta.get("shifts", [])
    N = ctx.n
    d = len(shifts)
    idx = _tuple_indexer(N, d)
    cols = []
    for t in idx:
        word_a = MonomialMatrix.identity(ctx, rep_a.dim)
        word_b = MonomialMatrix.identity(ctx, rep_b.dim)
        for name, k in zip(shifts, t):
            word_a = word_a @ rep_a.generators[name] ** k
            word_b = word_b @ rep_b.generators[name] ** k
        # word_a e_0 = c * e_i
        i, c = word_a.perm[0], word_a.coeffs[0]
        j, c2 = word_b.perm[start], word_b.coeffs[start]
        cols.append((i, j, c2 / c))
    perm = [0] * rep_a.dim
    coeffs = [None] * rep_a.dim
    for i, j, c in cols:
        perm[i], coeffs[i] = j, c
    return MonomialMatrix(ctx, perm, coeffs)


def is_intertwiner(t, rep_a, rep_b):
    return all((t @ rep_a.generators[g]).equals(rep_b.generators[g] @ t)
               for g in rep_a.generators)


# ---------------------------------------------------------------------------
# quantum torus representations from generator images


class LatticeAction:
    """rho([sum n_i b_i]) = omega^{-sum_{i<j} n_i n_j (b_i, b_j)} prod rho(b_i)^{n_i}."""

    def __init__(self, ctx, lattice, basis, mats, coords):
        self.ctx = ctx
        self.lattice = lattice
        self.basis = [tuple(b) for b in basis]
        self.mats = mats
        self.coords = coords
        r = len(self.basis)
        self._f2 = [[lattice.form2(self.basis[i], self.basis[j]) for j in range(r)]
                    for i in range(r)]

    def __call__(self, x):
        n = self.coords(tuple(x))
        r = len(n)
        u_exp = 0
        for i in range(r):
            for j in range(i + 1, r):
                u_exp -= n[i] * n[j] * self._f2[i][j]
        out = MonomialMatrix.identity(self.ctx, self.mats[0].dim)
        for m, k in zip(self.mats, n):
            if k:
                out = out @ m ** k
        return out.scale(self.ctx.u_power(u_exp))


_TRIANGLE_CORNERS = ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def triangle_irrep(ctx, alpha=1, beta=1, h=1):
    """N-dimensional simple module of the balanced CF algebra of a triangle.

    The corner monomials X_i = [Z_{e_{i-1}} Z_{e_{i+1}}] act by
    X_0 = alpha * clock, X_1 = beta * shift and X_2 fixed by
    [Z_0^2 Z_1^2 Z_2^2] = h.
    """
    n = ctx.n
    lat = triangle_lattice()
    a, b, hv = ctx.coerce(alpha), ctx.coerce(beta), ctx.coerce(h)
    for name, v in (("alpha", a), ("beta", b), ("h", hv)):
        if ctx.is_zero(v):
            raise RepresentationError(f"parameter {name} must be nonzero")
    # clock D with D S = omega^{2 (X0, X1)} S D
    c01 = lat.form2(_TRIANGLE_CORNERS[0], _TRIANGLE_CORNERS[1])
    x0 = MonomialMatrix.diagonal(ctx, [ctx.u_power(2 * c01 * j) for j in range(n)]).scale(a)
    x1 = MonomialMatrix.shift(ctx, n).scale(b)
    # [X0][X1][X2] = omega^{(X0,X1) + (X0+X1, X2)} [H]
    s = lat.form2(_TRIANGLE_CORNERS[0], _TRIANGLE_CORNERS[1]) + lat.form2(
        (1, 1, 2), _TRIANGLE_CORNERS[2])
    x2 = (x1.inverse() @ x0.inverse()).scale(hv * ctx.u_power(s))
    mats = [x0, x1, x2]

    def coords(k):
        if not is_balanced_triangle(k):
            raise RepresentationError(f"{k} is not balanced")
        kk = list(k)
        return tuple((kk[(i - 1) % 3] + kk[(i + 1) % 3] - kk[i]) // 2 for i in range(3))

    act = LatticeAction(ctx, lat, _TRIANGLE_CORNERS, mats, coords)
    gens = {f"X{i}": m for i, m in enumerate(mats)}
    comm = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                comm[(f"X{i}", f"X{j}")] = 2 * lat.form2(_TRIANGLE_CORNERS[i], _TRIANGLE_CORNERS[j])
    rep = Representation(ctx, gens, comm, action=act, lattice=lat, kind="triangle")
    rep.central = {f"X{i}^N": m ** n for i, m in enumerate(mats)}
    rep.central["H"] = act((2, 2, 2))
    rep.meta["params"] = (a, b, hv)
    return rep


def is_balanced_triangle(k):
    return sum(k) % 2 == 0


def local_rep(s, face_reps):
    """Tensor product of triangle modules pulled back along the triangular decomposition."""
    if len(face_reps) != s.n_faces:
        raise RepresentationError(f"need {s.n_faces} face representations, got {len(face_reps)}")
    ctx = face_reps[0].ctx
    if any(r.ctx != ctx for r in face_reps):
        raise RepresentationError("face representations use different contexts")
    lat = cf_algebra(s)

    def action(k):
        k = tuple(k)
        if not is_balanced(s, k):
            raise RepresentationError(f"{k} is not balanced")
        out = None
        for r, kf in zip(face_reps, face_factors(s, i_delta_vector(s, k))):
            m = r.action(kf)
            out = m if out is None else out.kron(m)
        return out

    basis = balanced_basis(s)
    gens = {f"b{i}": action(b) for i, b in enumerate(basis)}
    comm = {}
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            if i != j:
                comm[(f"b{i}", f"b{j}")] = 2 * lat.form2(bi, bj)
    rep = Representation(ctx, gens, comm, action=action, lattice=lat, kind="local")
    rep.meta["basis"] = basis
    rep.meta["surface"] = s
    rep.central = surface_central_matrices(s, action, ctx.n)
    return rep


def surface_central_matrices(s, action, n):
    cen = central_elements(s)
    out = {}
    for i, b in enumerate(balanced_basis(s)):
        out[f"b{i}^N"] = action(tuple(n * v for v in b))
    for pid, k in cen["H_p"].items():
        out[f"H_p{pid}"] = action(k)
    for bid, k in cen["H_boundary"].items():
        out[f"H_d{bid}"] = action(k)
    out["H_c"] = action(cen["H_c"])
    return out


def direct_sum(r1, r2):
    if set(r1.generators) != set(r2.generators):
        raise RepresentationError("generator sets differ")
    gens = {g: r1.generators[g].direct_sum(r2.generators[g]) for g in r1.generators}
    central = {c: r1.central[c].direct_sum(r2.central[c]) for c in r1.central if c in r2.central}
    action = None
    if r1.action is not None and r2.action is not None:
        def action(x):
            return r1.action(x).direct_sum(r2.action(x))
    return Representation(r1.ctx, gens, dict(r1.commutation), central, action, r1.lattice,
                          kind=f"{r1.kind}+{r2.kind}", meta=dict(r1.meta))


# ---------------------------------------------------------------------------
# central characters, commutants and decomposition


@dataclass
class CentralCharacter:
    values: dict

    def key(self, ctx):
        return tuple((k, _hashable(ctx, v)) for k, v in sorted(self.values.items()))

    @property
    def shadow(self):
        return {k: v for k, v in self.values.items() if k.endswith("^N")}

    @property
    def puncture_invariants(self):
        return {k: v for k, v in self.values.items() if k.startswith("H_p")}

    @property
    def boundary_invariants(self):
        return {k: v for k, v in self.values.items() if k.startswith("H_d") or k == "H"}

    @property
    def central_charge(self):
        return self.values.get("H_c")


def _hashable(ctx, v):
    if ctx.exact:
        return v
    z = complex(v)
    scale = max(1.0, abs(z))
    return (round(z.real / scale, 7) * scale, round(z.imag / scale, 7) * scale)


def _lookup(ctx, entries, values):
    """Payload of the first entry whose values all match ``values`` (tolerant in float mode)."""
    for vals, payload in entries:
        if all(ctx.eq(a, b) for a, b in zip(vals, values)):
            return payload
    return None


def central_character(rep):
    vals = {}
    for name, m in rep.central.items():
        v = m.scalar_value()
        if v is None:
            raise RepresentationError(f"central element {name} does not act by a scalar")
        vals[name] = v
    return CentralCharacter(vals)


def commutant_dimension(ctx, mats, dim=None):
    """Dimension of {X : X G = G X for all G} for monomial G, exactly.

    Conjugation by G sends position (i, j) to (pi(i), pi(j)) with factor
    g_i / g_j; a connected orbit supports a solution iff its holonomy is 1.
    """
    if not mats:
        return (dim or 0) ** 2
    n = mats[0].dim
    value = {}
    ok = {}
    comps = 0
    good = 0
    for start in ((i, j) for i in range(n) for j in range(n)):
        if start in value:
            continue
        comps += 1
        value[start] = ctx.one
        stack = [start]
        consistent = True
        while stack:
            i, j = stack.pop()
            vij = value[(i, j)]
            for g in mats:
                t = (g.perm[i], g.perm[j])
                v = vij * g.coeffs[i] / g.coeffs[j]
                if t in value:
                    if not ctx.eq(value[t], v):
                        consistent = False
                else:
                    value[t] = v
                    stack.append(t)
        ok[start] = consistent
        good += consistent
    return good


def commutant_dimension_dense(mats, tol=1e-8):
    """Independent oracle: nullity of the stacked commutation equations."""
    ms = [m.to_dense() for m in mats]
    n = ms[0].shape[0]
    eye = np.eye(n)
    rows = [np.kron(eye, g) - np.kron(g.T, eye) for g in ms]
    a = np.vstack(rows)
    sv = np.linalg.svd(a, compute_uv=False)
    scale = max(1.0, sv[0])
    return int(n * n - np.sum(sv > tol * scale))


def _roots_of(ctx, value, length):
    """All ``length``-th roots of ``value`` (distinct)."""
    base = _nth_root_exact(ctx, value, length) if ctx.exact else nth_root(ctx, value, length)
    if ctx.exact:
        if ctx.n % length:
            raise RepresentationError(f"cycle length {length} does not divide N={ctx.n}")
        step = ctx.n // length
        return [base * ctx.zeta(step * m) for m in range(length)]
    return [base * cmath.exp(2j * cmath.pi * m / length) for m in range(length)]


def _diagonalize_step(ctx, c, ops):
    """Change basis so that monomial central ``c`` becomes diagonal.

    Returns the list of transformed ``ops`` (still monomial) in the new
    basis, plus the diagonal of ``c``.
    """
    n = c.dim
    new_index = {}
    vectors = []  # list of (cycle, coefficient list, eigenvalue)
    for cyc in c.cycles():
        L = len(cyc)
        prod = ctx.one
        for i in cyc:
            prod = prod * c.coeffs[i]
        for lam in _roots_of(ctx, prod, L):
            a = [ctx.one]
            for t in range(L - 1):
                a.append(a[t] * c.coeffs[cyc[t]] / lam)
            vec = {i: x for i, x in zip(cyc, a)}
            new_index.setdefault(cyc[0], []).append(((lam,), len(vectors)))
            vectors.append((cyc, vec, lam))
    cycle_of = {}
    for k, (cyc, _, _) in enumerate(vectors):
        for i in cyc:
            cycle_of.setdefault(i, cyc)
    out = []
    for g in ops:
        perm, coeffs = [0] * n, [None] * n
        for k, (cyc, vec, lam) in enumerate(vectors):
            # image of vec under g: sum_i vec_i g_i e_{pi(i)}
            img = {g.perm[i]: x * g.coeffs[i] for i, x in vec.items()}
            target_cyc = cycle_of[g.perm[cyc[0]]]
            tgt = _lookup(ctx, new_index.get(target_cyc[0], ()),
                          (_eig_of(ctx, c, target_cyc, img),))
            if tgt is None:
                raise RepresentationError("operator does not preserve the eigenspaces")
            tvec = vectors[tgt][1]
            i0 = next(iter(img))
            mu = img[i0] / tvec[i0]
            for i, x in img.items():
                if not ctx.eq(x, mu * tvec[i]):
                    raise RepresentationError("transformed operator is not monomial")
            if set(img) != set(tvec):
                raise RepresentationError("transformed operator is not monomial")
            perm[k], coeffs[k] = tgt, mu
        out.append(MonomialMatrix(ctx, perm, coeffs))
    return out, [v[2] for v in vectors]


def _eig_of(ctx, c, cyc, vec):
    """Eigenvalue of c on a vector supported on one of its cycles."""
    i = cyc[0]
    j = c.perm[i]
    # (c vec)_j = c_i vec_i = lam vec_j
    return c.coeffs[i] * vec[i] / vec[j]


@dataclass
class IsotypicComponent:
    character: CentralCharacter
    multiplicity: int
    dimension: int
    block_dimension: int


def decompose(rep, central_names=None):
    """Split into isotypic blocks by joint eigenvalues of the central elements.

    Each block's commutant must have dimension m^2 where m divides the
    block dimension; the simple dimension is block_dim / m.
    """
    ctx = rep.ctx
    names = list(central_names or rep.central)
    gens = list(rep.generators.values())
    cens = [rep.central[k] for k in names]
    diag_vals = [None] * len(cens)
    for idx in range(len(cens)):
        c = cens[idx]
        if all(p == i for i, p in enumerate(c.perm)):
            diag_vals[idx] = list(c.coeffs)
            continue
        transformed, diag = _diagonalize_step(ctx, c, gens + cens)
        gens = transformed[: len(gens)]
        cens = transformed[len(gens):]
        diag_vals[idx] = diag
        # earlier diagonal operators stay diagonal; refresh their values
        for j in range(idx):
            cj = cens[j]
            if any(p != i for i, p in enumerate(cj.perm)):
                raise RepresentationError("central elements do not commute")
            diag_vals[j] = list(cj.coeffs)
    for j, cj in enumerate(cens):
        diag_vals[j] = list(cj.coeffs)
    groups = []
    for i in range(rep.dim):
        vals = tuple(diag_vals[j][i] for j in range(len(cens)))
        idxs = _lookup(ctx, groups, vals)
        if idxs is None:
            groups.append((vals, [i]))
        else:
            idxs.append(i)
    out = []
    for _, idxs in groups:
        block = [g.restrict(idxs) for g in gens]
        cd = commutant_dimension(ctx, block)
        m = math.isqrt(cd)
        if m * m != cd or len(idxs) % m:
            raise RepresentationError(
                f"block of dimension {len(idxs)} has commutant dimension {cd}; not isotypic")
        vals = {name: diag_vals[j][idxs[0]] for j, name in enumerate(names)}
        out.append(IsotypicComponent(CentralCharacter(vals), m, len(idxs) // m, len(idxs)))
    return out


def simple_dimension(s, n):
    if n % 2 == 0 or n <= 1:
        raise ValueError("N must be odd and > 1")
    d_bd = sum(d_boundary(k) for k in s.boundary_counts)
    return n ** (cover_genus(s) - s.genus + d_bd)


# ---------------------------------------------------------------------------
# serialization


def _encode(ctx, v):
    if ctx.exact:
        return [str(c) for c in v.coeffs]
    z = complex(v)
    return [repr(z.real), repr(z.imag)]


def _decode(ctx, data):
    if ctx.exact:
        return ctx.field.element([Fraction(x) for x in data])
    return complex(float(data[0]), float(data[1]))


def rep_to_json(rep):
    ctx = rep.ctx
    doc = {
        "N": ctx.n,
        "mode": ctx.mode,
        "kind": rep.kind,
        "dimension": rep.dim,
        "commutation": [[a, b, k] for (a, b), k in sorted(rep.commutation.items())],
        "generators": {},
        "central": {},
    }
    for section, mats in (("generators", rep.generators), ("central", rep.central)):
        for name, m in mats.items():
            doc[section][name] = [[_encode(ctx, v) for v in row] for row in m.entries()]
    return json.dumps(doc, indent=1, sort_keys=True)


def _from_dense(ctx, rows):
    n = len(rows)
    perm, coeffs = [None] * n, [None] * n
    for j, row in enumerate(rows):
        for i, v in enumerate(row):
            if not ctx.is_zero(v):
                if perm[i] is not None:
                    raise RepresentationError("matrix is not monomial")
                perm[i], coeffs[i] = j, v
    if any(p is None for p in perm):
        raise RepresentationError("matrix is singular")
    return MonomialMatrix(ctx, perm, coeffs)


def rep_from_json(text):
    doc = json.loads(text)
    ctx = RootOfUnityContext(int(doc["N"]), doc["mode"])
    gens = {k: _from_dense(ctx, [[_decode(ctx, v) for v in row] for row in rows])
            for k, rows in doc["generators"].items()}
    central = {k: _from_dense(ctx, [[_decode(ctx, v) for v in row] for row in rows])
               for k, rows in doc.get("central", {}).items()}
    comm = {(a, b): int(k) for a, b, k in doc.get("commutation", [])}
    return Representation(ctx, gens, comm, central, kind=doc.get("kind", ""))


__all__ = [
    "MonomialMatrix", "Representation", "CentralCharacter", "IsotypicComponent",
    "irrep_w", "irrep_y", "triangle_irrep", "local_rep", "direct_sum", "central_character",
    "decompose", "simple_dimension", "commutant_dimension", "commutant_dimension_dense",
    "y_intertwiner", "is_intertwiner", "rep_to_json", "rep_from_json", "nth_root", "d_of",
]
