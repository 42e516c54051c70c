"""Command-line front end.

Exit status: 0 on success, 1 on bad input, 2 when an internal check fails.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from .coeff import RootOfUnityContext
from .curves import CurveError, load_curve_file
from .nonab import (AbelianCharacter, NonAbelianError, SpinForm, curve_function, na_star,
                    shear_bend)
from .qtorus import (ExpressionError, LatticeError, balanced_lattice, cf_algebra,
                     equivariant_torus, parse_expression, render_element, render_monomial)
from .qtrace import phi_map, quantum_trace, theta_map
from .reps import (RepresentationError, central_character, decompose, irrep_w, irrep_y,
                   local_rep, rep_from_json, rep_to_json, simple_dimension, triangle_irrep)
from .surface import (SurfaceError, build_cover, cover_data, cover_genus, decompose_basic,
                      load_surface_file, z2_cycle_basis)


class VerificationError(RuntimeError):
    """An internal consistency check failed."""


INPUT_ERRORS = (SurfaceError, CurveError, ExpressionError, LatticeError, NonAbelianError,
                RepresentationError, OSError, json.JSONDecodeError, KeyError, ValueError)


# ---------------------------------------------------------------------------
# omega modes and rendering


def parse_omega(text):
    if text in ("symbolic", "one"):
        return text, None
    if text.startswith("root:"):
        try:
            n = int(text[5:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad root order in {text!r}") from None
        if n <= 1 or n % 2 == 0:
            raise argparse.ArgumentTypeError("root order must be odd and > 1")
        return "root", n
    raise argparse.ArgumentTypeError(f"--omega must be symbolic, root:<N> or one, got {text!r}")


def format_value(v):
    """Canonical text for a cyclotomic or complex number."""
    if isinstance(v, complex):
        re_, im = (0.0 if abs(v.real) < 1e-12 else v.real), (0.0 if abs(v.imag) < 1e-12 else v.imag)
        return f"({re_:.12g}{im:+.12g}j)"
    terms = []
    for i, c in enumerate(v.coeffs):
        if c:
            terms.append(str(c) if i == 0 else f"{c}*z^{i}")
    return "(" + (" + ".join(terms) if terms else "0") + ")"


def render(el, omega, mode="exact"):
    kind, n = omega
    if kind == "symbolic":
        return render_element(el)
    if kind == "one":
        terms = el.at_one()
        if not terms:
            return "0"
        return " + ".join(f"{c}*{render_monomial(el.lattice, x)}" for x, c in sorted(terms.items()))
    ctx = RootOfUnityContext(n, mode)
    vals = el.evaluate_coefficients(ctx)
    parts = [f"{format_value(c)}*{render_monomial(el.lattice, x)}"
             for x, c in sorted(vals.items()) if not ctx.is_zero(c)]
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# subcommands


def _pick_curve(path, name):
    curves = load_curve_file(path)
    if name is None:
        if len(curves) != 1:
            raise CurveError(f"{path} holds {len(curves)} curves; choose one with --curve")
        return next(iter(curves.values()))
    if name not in curves:
        raise CurveError(f"no curve named {name!r} in {path}")
    return curves[name]


def cmd_info(args, out):
    s = load_surface_file(args.surface)
    cov = build_cover(s)
    if cover_genus(s) != cov.genus:
        raise VerificationError("cover genus formula disagrees with the constructed cover")
    summ = s.summary()
    out.write(f"faces: {summ['faces']}\n")
    out.write(f"edges: {summ['edges']} ({summ['inner_edges']} inner)\n")
    out.write(f"genus: {s.genus}\n")
    out.write(f"inner punctures: {s.n_inner_punctures}\n")
    out.write(f"boundary components: {len(s.boundary_components)}\n")
    out.write(f"boundary puncture counts: {list(s.boundary_counts)}\n")
    out.write(f"euler characteristic: {s.euler_characteristic}\n")
    out.write(f"cover genus: {cov.genus}\n")
    pieces = decompose_basic(cover_data(s))
    out.write("basic pieces: " + " ".join(f"{k}x{v}" for k, v in sorted(pieces.items())) + "\n")
    out.write("weil-petersson:\n")
    for row in s.wp_matrix():
        out.write("  " + " ".join(f"{v:>2}" for v in row) + "\n")


def cmd_trace(args, out):
    s = load_surface_file(args.surface)
    c = _pick_curve(args.curves, args.curve)
    tr = quantum_trace(s, c)
    out.write(render(tr, args.omega, args.mode) + "\n")


def cmd_mul(args, out):
    s = load_surface_file(args.surface)
    lat = cf_algebra(s)
    x = parse_expression(lat, args.left)
    y = parse_expression(lat, args.right)
    out.write(render(x * y, args.omega, args.mode) + "\n")


def cmd_phi(args, out):
    s = load_surface_file(args.surface)
    cov = build_cover(s)
    el = parse_expression(balanced_lattice(s), args.expression)
    out.write(render(phi_map(s, el, equivariant_torus(cov, args.labeling), args.labeling),
                     args.omega, args.mode) + "\n")


def cmd_theta(args, out):
    s = load_surface_file(args.surface)
    cov = build_cover(s)
    el = parse_expression(equivariant_torus(cov, args.labeling), args.expression)
    out.write(render(theta_map(s, el, balanced_lattice(s), args.labeling),
                     args.omega, args.mode) + "\n")


def _context(args):
    kind, n = args.omega
    if kind != "root":
        raise ValueError("representations need --omega root:<N>")
    return RootOfUnityContext(n, args.mode)


def _build_rep(args):
    ctx = _context(args)
    alg = args.algebra
    if alg == "local":
        if not args.surface:
            raise ValueError("local representations need a surface file")
        s = load_surface_file(args.surface)
        return local_rep(s, [triangle_irrep(ctx) for _ in range(s.n_faces)]), s
    if alg in ("W_q", "W_q2"):
        return irrep_w(ctx, "q" if alg == "W_q" else "q2"), None
    if alg == "triangle":
        return triangle_irrep(ctx), None
    if alg.startswith("Y:"):
        return irrep_y(ctx, int(alg[2:])), None
    raise ValueError(f"unknown algebra {alg!r}")


def cmd_rep_build(args, out):
    rep, _ = _build_rep(args)
    bad = rep.relation_failures()
    if bad:
        raise VerificationError(f"relations fail: {bad}")
    out.write(rep_to_json(rep) + "\n")


def cmd_rep_decompose(args, out):
    if args.rep:
        rep, s = rep_from_json(Path(args.rep).read_text(encoding="utf-8")), None
    else:
        rep, s = _build_rep(args)
    try:
        parts = decompose(rep)
    except RepresentationError as exc:
        raise VerificationError(str(exc)) from None
    out.write(f"dimension: {rep.dim}\n")
    out.write(f"classes: {len(parts)}\n")
    for i, p in enumerate(parts):
        out.write(f"class {i}: simple dimension {p.dimension}, multiplicity {p.multiplicity}\n")
    if s is not None:
        out.write(f"predicted simple dimension: {simple_dimension(s, rep.ctx.n)}\n")
        try:
            ch = central_character(rep)
            out.write(f"central charge: {format_value(ch.central_charge)}\n")
        except RepresentationError:
            pass


def _character(args, cov):
    lat = equivariant_torus(cov, args.labeling)
    if not args.character:
        raise ValueError("--character is required")
    return AbelianCharacter.from_json(lat, Path(args.character).read_text(encoding="utf-8"))


def _spin(args, s):
    basis = z2_cycle_basis(s)
    if args.spin:
        spin = SpinForm.from_json(basis, Path(args.spin).read_text(encoding="utf-8"))
        spin.validate()
        return spin
    return SpinForm.default(s, basis)


def cmd_na_eval(args, out):
    s = load_surface_file(args.surface)
    cov = build_cover(s)
    c = _pick_curve(args.curves, args.curve)
    rho = _character(args, cov)
    spin = _spin(args, s)
    x = na_star(cov, c, spin, args.labeling, rho.lattice)
    out.write(f"na*: {render(x, ('one', None))}\n")
    out.write(f"value: {format_value(curve_function(cov, c, spin, rho, args.labeling))}\n")


def cmd_shear_bend(args, out):
    s = load_surface_file(args.surface)
    cov = build_cover(s)
    rho = _character(args, cov)
    for e in s.edges:
        out.write(f"x_{e.id}: {format_value(shear_bend(cov, e.id, rho, args.labeling))}\n")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=parse_omega, default=("symbolic", None),
                        help="symbolic, root:<N> or one")
    common.add_argument("--labeling", type=int, choices=(1, 2), default=1)
    common.add_argument("--spin", help="spin form file (JSON map of cycle labels to 0/1)")
    common.add_argument("--character", help="character file (JSON map of basis labels)")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--float", dest="mode", action="store_const", const="float")
    common.set_defaults(mode="exact")

    p = argparse.ArgumentParser(prog="cfskein", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("info", parents=[common], help="surface statistics")
    q.add_argument("surface")
    q.set_defaults(func=cmd_info)

    q = sub.add_parser("trace", parents=[common], help="quantum trace of a curve")
    q.add_argument("surface")
    q.add_argument("curves")
    q.add_argument("--curve")
    q.set_defaults(func=cmd_trace)

    q = sub.add_parser("mul", parents=[common], help="product of two torus expressions")
    q.add_argument("surface")
    q.add_argument("left")
    q.add_argument("right")
    q.set_defaults(func=cmd_mul)

    for name, fn in (("phi", cmd_phi), ("theta", cmd_theta)):
        q = sub.add_parser(name, parents=[common], help=f"apply {name} termwise")
        q.add_argument("surface")
        q.add_argument("expression")
        q.set_defaults(func=fn)

    q = sub.add_parser("rep", help="representations")
    rsub = q.add_subparsers(dest="rep_command", required=True)
    for name, fn in (("build", cmd_rep_build), ("decompose", cmd_rep_decompose)):
        r = rsub.add_parser(name, parents=[common])
        r.add_argument("surface", nargs="?")
        r.add_argument("--algebra", default="local",
                       help="local (needs a surface), W_q, W_q2, triangle or Y:<n>")
        if name == "decompose":
            r.add_argument("--rep", help="JSON representation file")
        r.set_defaults(func=fn)

    q = sub.add_parser("na", help="non-abelianization")
    nsub = q.add_subparsers(dest="na_command", required=True)
    r = nsub.add_parser("eval", parents=[common])
    r.add_argument("surface")
    r.add_argument("curves")
    r.add_argument("--curve")
    r.set_defaults(func=cmd_na_eval)

    q = sub.add_parser("shear-bend", parents=[common], help="shear-bend coordinates")
    q.add_argument("surface")
    q.set_defaults(func=cmd_shear_bend)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        args.func(args, out)
    except (VerificationError, AssertionError, ArithmeticError) as exc:
        err.write(f"error: internal check failed: {exc}\n")
        return 2
    except INPUT_ERRORS as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
