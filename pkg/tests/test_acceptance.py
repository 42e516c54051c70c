"""The twelve acceptance criteria, each printed as one PASS/FAIL line."""

import time

from _helpers import random_balanced, random_closed_curves, random_vector, seeded
from conftest import ACCEPTANCE_LINES, surface
from cfskein.coeff import LaurentScalar, RootOfUnityContext
from cfskein.curves import edge_crossings, peripheral_curve
from cfskein.nonab import (AbelianCharacter, SpinForm, classical_product, curve_function,
                           evaluate, h1_action, na_star, poisson_bracket)
from cfskein.qtorus import (SkewLattice, TorusElement, balanced_basis, cf_algebra,
                            equivariant_torus, morita_embeddings)
from cfskein.qtrace import phi_leaf, quantum_trace
from cfskein.reps import (commutant_dimension_dense, decompose, irrep_w, irrep_y, local_rep,
                          simple_dimension, triangle_irrep)
from cfskein.surface import build_cover, cover_genus, z2_cycle_basis


def report(n, ok, text):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def mono(lat, x):
    return TorusElement.monomial(lat, x)


def test_criterion_01_torus_laws():
    t0 = time.perf_counter()
    rng = seeded(1)
    lats = [cf_algebra(surface(n)) for n in ("torus", "sphere4", "genus2_one_puncture")]
    lats.append(equivariant_torus(build_cover(surface("torus"))))
    bad = 0
    for lat in lats:
        one = TorusElement.one(lat)
        for _ in range(1000):
            x, y, z = (mono(lat, random_vector(lat.dim, rng)) for _ in range(3))
            (kx,), (ky,) = x.terms, y.terms
            twist = LaurentScalar.omega(2 * lat.form(kx, ky))
            bad += (x * y) * z != x * (y * z)
            bad += one * x != x or x * one != x
            bad += x * y != (y * x).scale(twist)
    dt = time.perf_counter() - t0
    report(1, bad == 0 and dt < 5,
           f"associativity, unit and omega^2(x,y) commutation on 4 lattices ({dt:.2f}s)")


def test_criterion_02_triangle_relation():
    t0 = time.perf_counter()
    s = surface("triangle")
    lat = cf_algebra(s)
    corners = []
    for i in range(3):
        k = [0, 0, 0]
        k[s.side_edge[(0, (i - 1) % 3)]] += 1
        k[s.side_edge[(0, (i + 1) % 3)]] += 1
        corners.append(mono(lat, k))
    w2 = LaurentScalar.omega(2)
    ok = all(corners[i] * corners[(i + 1) % 3] == (corners[(i + 1) % 3] * corners[i]).scale(w2)
             for i in range(3))
    dt = time.perf_counter() - t0
    report(2, ok and dt < 1, f"corner monomials omega^2-commute cyclically ({dt:.3f}s)")


def test_criterion_03_form_transport():
    # literal statement: the equivariant form of the images is twice the WP form
    t0 = time.perf_counter()
    rng = seeded(3)
    bad = []
    for name in ("torus", "triangle", "sphere4"):
        s = surface(name)
        cf = cf_algebra(s)
        eq = equivariant_torus(build_cover(s))
        basis = balanced_basis(s)
        pairs = [(x, y) for x in basis for y in basis]
        pairs += [(random_balanced(s, rng), random_balanced(s, rng)) for _ in range(200)]
        for x, y in pairs:
            if eq.form(phi_leaf(s, x), phi_leaf(s, y)) != 2 * cf.form(x, y):
                bad.append((name, x, y))
    dt = time.perf_counter() - t0
    report(3, not bad and dt < 5,
           f"form(phi x, phi y) = 2<x,y>_WP; {len(bad)} mismatching pairs ({dt:.2f}s)")


def test_criterion_04_trace_product(torus, torus_curves):
    t0 = time.perf_counter()
    tr = {n: quantum_trace(torus, c) for n, c in torus_curves.items()}
    lhs = tr["a"] * tr["b"]
    matches = [sign for sign in (1, -1)
               if lhs == tr["ab"].scale(LaurentScalar.omega(2 * sign))
               + tr["ab_inv"].scale(LaurentScalar.omega(-2 * sign))]
    # cyclic-start invariance on 20 curves
    rng = seeded(4)
    curves = []
    for name in ("torus", "sphere4", "twice_punctured_torus", "genus2_one_puncture"):
        s = surface(name)
        curves += [(s, c) for c in random_closed_curves(s, rng, 5)]
    cyclic_ok = len(curves) == 20 and all(
        quantum_trace(s, c.rotate(k)) == quantum_trace(s, c)
        for s, c in curves for k in range(1, len(c)))
    dt = time.perf_counter() - t0
    report(4, len(matches) == 1 and cyclic_ok and dt < 5,
           f"Tr(a)Tr(b) matches {len(matches)} sign assignments (need 1); "
           f"cyclic invariance on {len(curves)} curves {'ok' if cyclic_ok else 'broken'} ({dt:.2f}s)")


def test_criterion_05_peripheral_centrality():
    t0 = time.perf_counter()
    rng = seeded(5)
    bad, checked = 0, 0
    for name in ("monogon", "sphere3", "sphere4", "torus", "twice_punctured_torus",
                 "genus2_one_puncture"):
        s = surface(name)
        lat = cf_algebra(s)
        for p in s.inner_punctures:
            t = quantum_trace(s, peripheral_curve(s, p.id))
            for _ in range(50):
                m = mono(lat, random_balanced(s, rng))
                bad += t * m != m * t
                checked += 1
    dt = time.perf_counter() - t0
    report(5, bad == 0 and checked > 0 and dt < 5,
           f"Tr(gamma_p) central against {checked} balanced monomials ({dt:.2f}s)")


def test_criterion_06_representations():
    t0 = time.perf_counter()
    problems = []
    reps = []
    for n in (3, 5):
        ctx = RootOfUnityContext(n)
        reps += [(irrep_w(ctx, "q"), n), (irrep_w(ctx, "q2"), n)]
    ctx = RootOfUnityContext(3)
    for m in range(1, 7):
        d = (m - 1) // 2 if m % 2 else m // 2
        reps.append((irrep_y(ctx, m), 3 ** d))
    reps.append((triangle_irrep(ctx, 2, 3, 5), 3))
    for rep, dim in reps:
        if rep.relation_failures():
            problems.append(f"{rep.kind} relations")
        if rep.dim != dim:
            problems.append(f"{rep.kind} dimension {rep.dim} != {dim}")
        if rep.dim <= 27 and commutant_dimension_dense(list(rep.generators.values())) != 1:
            problems.append(f"{rep.kind} commutant")
    dt = time.perf_counter() - t0
    report(6, not problems and dt < 30,
           f"{len(reps)} modules: relations, dimensions, scalar commutant; "
           f"{problems or 'no problems'} ({dt:.2f}s)")


def test_criterion_07_classification():
    t0 = time.perf_counter()
    ctx = RootOfUnityContext(3)
    found = {}
    for name in ("torus", "sphere4"):
        s = surface(name)
        rep = local_rep(s, [triangle_irrep(ctx, 1 + f, 2, 1) for f in range(s.n_faces)])
        found[name] = (simple_dimension(s, 3), [(p.dimension, p.multiplicity)
                                                 for p in decompose(rep)])
    dims_ok = all(all(d == pred for d, _ in parts) for pred, parts in found.values())
    torus_parts = found["torus"][1]
    mult_ok = torus_parts == [(3, 3)]
    dt = time.perf_counter() - t0
    report(7, dims_ok and mult_ok and dt < 60,
           f"simple dimensions {dict((k, v[0]) for k, v in found.items())}, "
           f"torus blocks {torus_parts} ({dt:.2f}s)")


def test_criterion_08_trace_identities(torus, torus_curves):
    t0 = time.perf_counter()
    cov = build_cover(torus)
    lat = equivariant_torus(cov)
    spin = SpinForm.default(torus)
    rng = seeded(8)
    worst_prod = worst_fricke = 0.0
    for _ in range(100):
        rho = AbelianCharacter.random(lat, rng)
        t = {n: curve_function(cov, c, spin, rho) for n, c in torus_curves.items()}
        a, b, ab, abi, k = t["a"], t["b"], t["ab"], t["ab_inv"], t["K"]
        worst_prod = max(worst_prod, abs(a * b - ab - abi) / max(1.0, abs(a * b)))
        rhs = a * a + b * b + ab * ab - a * b * ab - 2
        worst_fricke = max(worst_fricke, abs(k - rhs) / max(1.0, abs(rhs)))
    dt = time.perf_counter() - t0
    report(8, worst_prod <= 1e-9 and worst_fricke <= 1e-9 and dt < 5,
           f"product identity rel. err {worst_prod:.1e}, Fricke rel. err {worst_fricke:.1e} "
           f"({dt:.2f}s)")


def test_criterion_09_poisson():
    t0 = time.perf_counter()
    rng = seeded(9)
    lat = cf_algebra(surface("sphere4"))
    agree = all(
        poisson_bracket(x, y) == poisson_bracket(x, y, "commutator")
        for x, y in ((mono(lat, random_vector(lat.dim, rng)), mono(lat, random_vector(lat.dim, rng)))
                     for _ in range(200)))
    jacobi = leibniz = True
    for _ in range(50):
        x, y, z = (mono(lat, random_vector(lat.dim, rng)) for _ in range(3))
        pb = poisson_bracket
        jac = pb(x, pb(y, z)) + pb(y, pb(z, x)) + pb(z, pb(x, y))
        jacobi &= jac.is_zero()
        lhs = pb(x, classical_product(y, z))
        rhs = classical_product(pb(x, y), z) + classical_product(y, pb(x, z))
        leibniz &= lhs == rhs
    dt = time.perf_counter() - t0
    report(9, agree and jacobi and leibniz and dt < 5,
           f"formula = commutator: {agree}; Jacobi: {jacobi}; Leibniz: {leibniz} ({dt:.2f}s)")


def test_criterion_10_morita():
    t0 = time.perf_counter()
    rng = seeded(10)
    e2 = SkewLattice(["1", "2", "3"], [[0, 2, -2], [-2, 0, 2], [2, -2, 0]], name="E2")
    md = morita_embeddings(None, e2, 3)
    ok = True
    for _ in range(100):
        y = TorusElement.monomial(e2, random_vector(3, rng, 5))
        x = TorusElement.monomial(md.e1, random_vector(3, rng, 5))
        ok &= md.i_map(md.j_map(y)) == md.phi2(y)
        ok &= md.j_map(md.i_map(x)) == md.phi1(x)
    dt = time.perf_counter() - t0
    report(10, ok and dt < 1, f"i.j = phi2 and j.i = phi1 on 100 monomials each ({dt:.3f}s)")


def test_criterion_11_cover_genus():
    t0 = time.perf_counter()
    names = ["triangle", "square", "monogon", "sphere3", "sphere4", "torus",
             "twice_punctured_torus", "genus2_one_puncture"]
    rows = {n: (cover_genus(surface(n)), build_cover(surface(n)).genus) for n in names}
    with_boundary = any(surface(n).boundary_components for n in names)
    ok = all(a == b for a, b in rows.values()) and len(rows) >= 5 and with_boundary
    dt = time.perf_counter() - t0
    report(11, ok and dt < 1, f"formula = Euler genus on {len(rows)} surfaces ({dt:.3f}s)")


def test_criterion_12_h1_equivariance(torus, torus_curves):
    t0 = time.perf_counter()
    cov = build_cover(torus)
    lat = equivariant_torus(cov)
    basis = z2_cycle_basis(torus)
    spin = SpinForm.default(torus, basis)
    rng = seeded(12)
    worst = 0.0
    curves = list(torus_curves.values())
    for i in range(basis.rank):
        chi = tuple(int(j == i) for j in range(basis.rank))
        for _ in range(20):
            rho = AbelianCharacter.random(lat, rng)
            moved = h1_action(chi, rho, basis)
            for c in curves:
                x = na_star(cov, c, spin, lattice=lat)
                cls = basis.coordinates(edge_crossings(torus, c))
                sign = -1 if sum(a * b for a, b in zip(chi, cls)) % 2 else 1
                worst = max(worst, abs(evaluate(x, moved) - sign * evaluate(x, rho)))
    dt = time.perf_counter() - t0
    report(12, worst <= 1e-10 and len(curves) == 5 and dt < 5,
           f"max deviation {worst:.1e} over {basis.rank} cocycles, 20 characters, "
           f"{len(curves)} curves ({dt:.2f}s)")
