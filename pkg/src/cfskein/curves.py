"""Combinatorial curves and arcs on a triangulated surface.

A component is a sequence of segments ``(face, in_side, out_side)``.  Closed
components are cyclic; arcs start and end on boundary sides.  Intersection
points with edges sit between consecutive segments (plus the two endpoints
of an arc).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction


class CurveError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Component:
    segments: tuple
    closed: bool = True
    orient: int = 1
    states: tuple | None = None  # (first, last) in {-1, +1} for stated arcs

    def rotate(self, k):
        if not self.closed:
            raise CurveError("only closed components can be rotated")
        k %= len(self.segments)
        return replace(self, segments=self.segments[k:] + self.segments[:k])

    def reversed(self):
        segs = tuple((f, b, a) for f, a, b in reversed(self.segments))
        states = None if self.states is None else self.states[::-1]
        return replace(self, segments=segs, orient=-self.orient, states=states)

    def points(self):
        """Intersection points as (segment index, 'in'|'out') handles, in order.

        For a closed component point i sits after segment i.  For an arc the
        first point is the start of segment 0.
        """
        n = len(self.segments)
        if self.closed:
            return [(i, "out") for i in range(n)]
        return [(0, "in")] + [(i, "out") for i in range(n)]

    def point_sides(self):
        """The (face, side) through which each point is seen on leaving."""
        pts = []
        for i, kind in self.points():
            f, a, b = self.segments[i]
            pts.append((f, a) if kind == "in" else (f, b))
        return pts


@dataclass(frozen=True)
class CombinatorialCurve:
    components: tuple
    name: str | None = None

    @property
    def closed(self):
        return all(c.closed for c in self.components)

    def with_orientation(self, orient):
        return replace(self, components=tuple(replace(c, orient=orient) for c in self.components))

    def with_states(self, states):
        if len(self.components) != 1 or self.components[0].closed:
            raise CurveError("states apply to a single arc")
        return replace(self, components=(replace(self.components[0], states=tuple(states)),))

    def rotate(self, k):
        return replace(self, components=tuple(c.rotate(k) for c in self.components))

    def __len__(self):
        return sum(len(c.segments) for c in self.components)


def curve(segments, closed=True, orient=1, states=None, name=None):
    return CombinatorialCurve((Component(tuple(tuple(s) for s in segments), closed, orient,
                                         None if states is None else tuple(states)),), name)


# ---------------------------------------------------------------------------
# parsing


def _parse_state(tok, lineno):
    if tok in ("+", "+1", "1"):
        return 1
    if tok in ("-", "-1"):
        return -1
    raise CurveError(f"bad state {tok!r}", lineno)


def load_curves(text):
    """Parse a curve file into a dict name -> CombinatorialCurve."""
    curves = {}
    order = []
    cur_name, comps, cur = None, [], None

    def close_component():
        nonlocal cur
        if cur is not None:
            if not cur["segs"]:
                raise CurveError(f"curve {cur_name!r} has an empty component", cur["line"])
            comps.append(Component(tuple(cur["segs"]), cur["closed"], cur["orient"],
                                   cur["states"]))
        cur = None

    def close_curve():
        nonlocal comps
        close_component()
        if cur_name is not None:
            curves[cur_name] = CombinatorialCurve(tuple(comps), cur_name)
            order.append(cur_name)
        comps = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head in ("curve", "component"):
            if head == "curve":
                if len(parts) != 3:
                    raise CurveError("expected 'curve <name> closed|arc'", lineno)
                close_curve()
                cur_name = parts[1]
                if cur_name in curves:
                    raise CurveError(f"duplicate curve name {cur_name!r}", lineno)
                kind = parts[2]
            else:
                if cur_name is None or len(parts) != 2:
                    raise CurveError("expected 'component closed|arc' inside a curve", lineno)
                close_component()
                kind = parts[1]
            if kind not in ("closed", "arc"):
                raise CurveError(f"curve kind must be closed or arc, got {kind!r}", lineno)
            cur = {"segs": [], "closed": kind == "closed", "orient": 1, "states": None,
                   "line": lineno}
        elif cur is None:
            raise CurveError(f"{head!r} outside a curve block", lineno)
        elif head == "seg":
            if len(parts) != 4 or not all(p.lstrip("-").isdigit() for p in parts[1:]):
                raise CurveError("expected 'seg <face> <in> <out>'", lineno)
            cur["segs"].append(tuple(int(p) for p in parts[1:]))
        elif head == "orient":
            if len(parts) != 2 or parts[1] not in ("+", "-"):
                raise CurveError("expected 'orient +|-'", lineno)
            cur["orient"] = 1 if parts[1] == "+" else -1
        elif head == "states":
            if len(parts) != 3:
                raise CurveError("expected 'states <first> <last>'", lineno)
            if cur["closed"]:
                raise CurveError("states only apply to arcs", lineno)
            cur["states"] = (_parse_state(parts[1], lineno), _parse_state(parts[2], lineno))
        else:
            raise CurveError(f"unknown directive {head!r}", lineno)
    close_curve()
    return {k: curves[k] for k in order}


def load_curve_file(path):
    with open(path, encoding="utf-8") as fh:
        return load_curves(fh.read())


def dump_curve(c):
    lines = []
    for i, comp in enumerate(c.components):
        kind = "closed" if comp.closed else "arc"
        lines.append(f"curve {c.name or 'c'} {kind}" if i == 0 else f"component {kind}")
        lines.extend(f"seg {f} {a} {b}" for f, a, b in comp.segments)
        if comp.orient != 1:
            lines.append("orient -")
        if comp.states is not None:
            lines.append("states " + " ".join("+" if x > 0 else "-" for x in comp.states))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation and normal coordinates


def validate_curve(s, c):
    """Raise CurveError unless ``c`` is a well-formed curve on ``s``."""
    if not c.components:
        return
    for ci, comp in enumerate(c.components):
        segs = comp.segments
        if not segs:
            raise CurveError(f"component {ci} is empty")
        for f, a, b in segs:
            if not (0 <= f < s.n_faces and 0 <= a < 3 and 0 <= b < 3):
                raise CurveError(f"component {ci}: segment ({f},{a},{b}) out of range")
            if a == b:
                raise CurveError(f"component {ci}: backtracking segment ({f},{a},{b})")
        links = list(zip(segs, segs[1:]))
        if comp.closed:
            links.append((segs[-1], segs[0]))
        for x, y in links:
            if s.glue.get((x[0], x[2])) != (y[0], y[1]):
                raise CurveError(f"component {ci}: segment {x} does not chain to {y}")
        if not comp.closed:
            first, last = (segs[0][0], segs[0][1]), (segs[-1][0], segs[-1][2])
            for side in (first, last):
                if side in s.glue:
                    raise CurveError(f"component {ci}: arc endpoint on inner side {side}")
        if comp.orient not in (1, -1):
            raise CurveError(f"component {ci}: orientation must be +1 or -1")
        if comp.states is not None and (comp.closed or any(x not in (1, -1) for x in comp.states)):
            raise CurveError(f"component {ci}: bad endpoint states")


def edge_crossings(s, c):
    """Number of intersection points of ``c`` with every edge."""
    out = [0] * s.n_edges
    for comp in c.components:
        for side in comp.point_sides():
            out[s.side_edge[side]] += 1
    return tuple(out)


def corner_arcs(s, nc):
    """Corner-arc counts m[f][k] (arcs around vertex k) or CurveError."""
    m = []
    for f in range(s.n_faces):
        n = [nc[s.side_edge[(f, k)]] for k in range(3)]
        row = []
        for k in range(3):
            twice = n[k] + n[(k + 1) % 3] - n[(k + 2) % 3]
            if twice < 0:
                raise CurveError(f"face {f}: triangle inequality fails for {tuple(n)}")
            if twice % 2:
                raise CurveError(f"face {f}: odd total {sum(n)}")
            row.append(twice // 2)
        m.append(row)
    return m


def normal_to_curve(s, nc, name=None):
    """Multicurve with the given normal coordinates, one component per strand loop."""
    nc = tuple(nc)
    if len(nc) != s.n_edges or any(x < 0 for x in nc):
        raise CurveError("normal coordinates need one non-negative entry per edge")
    m = corner_arcs(s, nc)
    # points on side (f, k) are numbered 0..n-1 clockwise; corner arcs at
    # vertex k join the last points of side k to the first of side k+1
    partner = {}
    for f in range(s.n_faces):
        for k in range(3):
            k1 = (k + 1) % 3
            n_k = nc[s.side_edge[(f, k)]]
            for i in range(m[f][k]):
                x, y = (f, k, n_k - 1 - i), (f, k1, i)
                partner[x] = y
                partner[y] = x

    def across(pt):
        f, k, j = pt
        other = s.glue.get((f, k))
        if other is None:
            return None
        n = nc[s.side_edge[(f, k)]]
        return (other[0], other[1], n - 1 - j)

    seen = set()
    comps = []

    def trace(start):
        segs = []
        pt = start
        while True:
            seen.add(pt)
            nxt = partner[pt]
            seen.add(nxt)
            segs.append((pt[0], pt[1], nxt[1]))
            far = across(nxt)
            if far is None:
                return segs, False
            if far == start:
                return segs, True
            pt = far

    boundary_pts = sorted(p for p in partner if (p[0], p[1]) not in s.glue)
    for p in boundary_pts:
        if p not in seen:
            segs, closed = trace(p)
            assert not closed
            comps.append(Component(tuple(segs), closed=False))
    for p in sorted(partner):
        if p not in seen:
            segs, closed = trace(p)
            assert closed
            comps.append(Component(tuple(segs), closed=True))
    return CombinatorialCurve(tuple(comps), name)


def peripheral_curve(s, pid):
    """Curve following the corner orbit of a puncture, one segment per corner."""
    p = s.punctures[pid]
    segs = tuple((f, k, (k + 1) % 3) for f, k in p.corners)
    return CombinatorialCurve((Component(segs, closed=p.inner),), name=f"gamma_p{pid}")


# ---------------------------------------------------------------------------
# relative intersection form


@dataclass
class CrossingData:
    inner: list = field(default_factory=list)      # (face, sign)
    boundary: list = field(default_factory=list)   # (edge, sign)

    def total(self):
        return sum((e for _, e in self.inner), Fraction(0)) + sum(
            (Fraction(e, 2) for _, e in self.boundary), Fraction(0))


def _realize(s, curves):
    """Positions of every curve point on its sides.

    Returns per curve a list over components of lists of point records
    ``(edge, rank)``; points on an edge are ranked by curve, component, then
    point index, along the clockwise direction of the edge's first side.
    """
    records = []
    per_edge = {}
    for ci, c in enumerate(curves):
        cur = []
        for k, comp in enumerate(c.components):
            pts = []
            for j, side in enumerate(comp.point_sides()):
                e = s.side_edge[side]
                key = (ci, k, j)
                per_edge.setdefault(e, []).append(key)
                pts.append((e, key))
            cur.append(pts)
        records.append(cur)
    rank = {}
    for e, keys in per_edge.items():
        total = len(keys)
        for r, key in enumerate(sorted(keys)):
            rank[key] = Fraction(r + 1, total + 1)
    return records, rank


def _position(s, side, e, frac):
    """Clockwise boundary parameter in [0,3) of a point on a face side."""
    first = s.edges[e].sides[0]
    along = frac if side == first else 1 - frac
    return side[1] + along


def _chords(s, c, records, rank, ci):
    """Oriented chords (face, start, end) of curve ``ci``; plus boundary ends."""
    chords = []
    ends = []
    for k, comp in enumerate(c.components):
        pts = records[ci][k]
        segs = comp.segments
        n = len(segs)
        for i, (f, a, b) in enumerate(segs):
            if comp.closed:
                in_pt = pts[(i - 1) % n]
                out_pt = pts[i]
            else:
                in_pt, out_pt = pts[i], pts[i + 1]
            x = _position(s, (f, a), in_pt[0], rank[in_pt[1]])
            y = _position(s, (f, b), out_pt[0], rank[out_pt[1]])
            chords.append((f, x, y) if comp.orient == 1 else (f, y, x))
        if not comp.closed:
            (f0, a0, _), (f1, _, b1) = segs[0], segs[-1]
            p0 = _position(s, (f0, a0), pts[0][0], rank[pts[0][1]])
            p1 = _position(s, (f1, b1), pts[-1][0], rank[pts[-1][1]])
            # o = +1 where the oriented arc leaves the surface
            ends.append(((f0, a0), p0, -comp.orient))
            ends.append(((f1, b1), p1, comp.orient))
    return chords, ends


def crossing_data(s, c1, c2):
    records, rank = _realize(s, [c1, c2])
    ch1, ends1 = _chords(s, c1, records, rank, 0)
    ch2, ends2 = _chords(s, c2, records, rank, 1)
    data = CrossingData()

    def ccw_before(p, r, q):
        # walking counterclockwise (decreasing parameter) from p, is r met before q
        return (p - r) % 3 < (p - q) % 3

    for f, p, q in ch1:
        for g, r, t in ch2:
            if f != g:
                continue
            r_in = ccw_before(p, r, q)
            t_in = ccw_before(p, t, q)
            if r_in != t_in:
                data.inner.append((f, 1 if r_in else -1))
    for side1, x1, o1 in ends1:
        for side2, x2, o2 in ends2:
            if side1 != side2:
                continue
            # boundary orientation runs counterclockwise, i.e. decreasing parameter
            precedes = 1 if x1 > x2 else -1
            data.boundary.append((s.side_edge[side1], -o1 * o2 * precedes))
    return data


def intersection_form(s, c1, c2):
    """Relative intersection number (a half-integer) of two oriented curves."""
    for c in (c1, c2):
        validate_curve(s, c)
    return crossing_data(s, c1, c2).total()
