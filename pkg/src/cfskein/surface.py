"""Triangulated punctured surfaces and their branched double covers.

Each face has sides 0, 1, 2 listed clockwise.  Vertex ``k`` of a face sits
between side ``k`` and side ``k+1``, so side ``k`` runs from vertex ``k-1``
to vertex ``k``.  A gluing of side ``(f, s)`` to ``(g, t)`` reverses
orientation: the start of one side is identified with the end of the other.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


class SurfaceError(ValueError):
    """Raised for malformed or inadmissible surface descriptions."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Edge:
    id: int
    sides: tuple  # one side for boundary edges, two for inner edges

    @property
    def inner(self):
        return len(self.sides) == 2


@dataclass(frozen=True)
class Puncture:
    id: int
    corners: tuple  # (face, vertex) in corner-walk order
    inner: bool


@dataclass(frozen=True)
class BoundaryComponent:
    id: int
    sides: tuple  # boundary sides in boundary order
    punctures: tuple


class _UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
        return ra

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


class TriangulatedSurface:
    """A triangulated punctured surface with all derived combinatorics."""

    def __init__(self, n_faces, gluings, name=None):
        if n_faces <= 0:
            raise SurfaceError("surface has no faces")
        self.name = name
        self.n_faces = n_faces
        self.glue = {}
        order = []
        for a, b in gluings:
            for side in (a, b):
                f, s = side
                if not (0 <= f < n_faces and 0 <= s < 3):
                    raise SurfaceError(f"side {f}.{s} does not exist")
            if a == b:
                raise SurfaceError(f"side {a[0]}.{a[1]} glued to itself")
            for side, other in ((a, b), (b, a)):
                if side in self.glue:
                    raise SurfaceError(f"side {side[0]}.{side[1]} glued twice")
                self.glue[side] = other
            order.append((a, b))
        self._build_edges(order)
        self._build_punctures()
        self._build_boundary()
        self._build_components()

    # -- construction -----------------------------------------------------

    def _build_edges(self, order):
        edges = []
        self.side_edge = {}
        for a, b in order:
            e = Edge(len(edges), (a, b))
            edges.append(e)
            self.side_edge[a] = self.side_edge[b] = e.id
        for f in range(self.n_faces):
            for s in range(3):
                if (f, s) not in self.glue:
                    e = Edge(len(edges), ((f, s),))
                    edges.append(e)
                    self.side_edge[(f, s)] = e.id
        self.edges = tuple(edges)

    def next_corner(self, corner):
        """Walk from a corner across side k+1, or None at the boundary."""
        f, k = corner
        other = self.glue.get((f, (k + 1) % 3))
        return None if other is None else other

    def prev_corner(self, corner):
        f, k = corner
        other = self.glue.get((f, k))
        if other is None:
            return None
        g, t = other
        return (g, (t - 1) % 3)

    def _build_punctures(self):
        seen = set()
        punctures = []
        corners = [(f, k) for f in range(self.n_faces) for k in range(3)]
        # boundary punctures first, starting from the corner after a boundary side
        for c in corners:
            if c in seen or (c[0], c[1]) in self.glue:
                continue
            walk = [c]
            cur = self.next_corner(c)
            while cur is not None:
                walk.append(cur)
                cur = self.next_corner(cur)
            seen.update(walk)
            punctures.append(Puncture(len(punctures), tuple(walk), False))
        for c in corners:
            if c in seen:
                continue
            walk = [c]
            cur = self.next_corner(c)
            while cur != c:
                walk.append(cur)
                cur = self.next_corner(cur)
            seen.update(walk)
            punctures.append(Puncture(len(punctures), tuple(walk), True))
        self.punctures = tuple(punctures)
        self.corner_puncture = {c: p.id for p in punctures for c in p.corners}

    def _build_boundary(self):
        # a boundary puncture links the boundary side before its first corner
        # to the boundary side after its last corner
        after = {}
        for p in self.punctures:
            if p.inner:
                continue
            f0, k0 = p.corners[0]
            f1, k1 = p.corners[-1]
            after[(f0, k0)] = ((f1, (k1 + 1) % 3), p.id)
        comps = []
        done = set()
        for side in sorted(after):
            if side in done:
                continue
            sides, punct = [], []
            cur = side
            while cur not in done:
                done.add(cur)
                sides.append(cur)
                nxt, pid = after[cur]
                punct.append(pid)
                cur = nxt
            comps.append(BoundaryComponent(len(comps), tuple(sides), tuple(punct)))
        self.boundary_components = tuple(comps)
        self.puncture_boundary = {pid: b.id for b in comps for pid in b.punctures}

    def _build_components(self):
        uf = _UnionFind(range(self.n_faces))
        for (f, _), (g, _) in self.glue.items():
            uf.union(f, g)
        groups = sorted(sorted(g) for g in uf.groups())
        self.face_component = {f: i for i, g in enumerate(groups) for f in g}
        self.components = []
        for i, faces in enumerate(groups):
            fs = set(faces)
            edges = [e for e in self.edges if e.sides[0][0] in fs]
            punct = [p for p in self.punctures if p.corners[0][0] in fs]
            bcs = [b for b in self.boundary_components if b.sides[0][0] in fs]
            chi = len(punct) - len(edges) + len(faces)
            two_g = 2 - chi - len(bcs)
            if two_g < 0 or two_g % 2:
                raise SurfaceError(f"component {i}: inconsistent Euler characteristic {chi}")
            g = two_g // 2
            inner = [p for p in punct if p.inner]
            if not punct:
                raise SurfaceError(f"component {i} has no puncture")
            small = (g == 0 and not bcs and len(punct) <= 2) or (
                g == 0 and len(bcs) == 1 and not inner and len(punct) <= 2)
            if small:
                raise SurfaceError(f"component {i} is a small surface")
            self.components.append({"faces": tuple(faces), "genus": g, "chi": chi,
                                    "boundary": len(bcs)})

    # -- derived data -----------------------------------------------------

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def inner_edges(self):
        return [e for e in self.edges if e.inner]

    @property
    def boundary_edges(self):
        return [e for e in self.edges if not e.inner]

    @property
    def inner_punctures(self):
        return [p for p in self.punctures if p.inner]

    @property
    def connected(self):
        return len(self.components) == 1

    def _single(self, key):
        if not self.connected:
            raise SurfaceError("surface is not connected")
        return self.components[0][key]

    @property
    def genus(self):
        return self._single("genus")

    @property
    def euler_characteristic(self):
        return len(self.punctures) - self.n_edges + self.n_faces

    @property
    def boundary_counts(self):
        return [len(b.punctures) for b in self.boundary_components]

    @property
    def n_boundary_even(self):
        return sum(1 for s in self.boundary_counts if s % 2 == 0)

    @property
    def n_boundary_odd(self):
        return sum(1 for s in self.boundary_counts if s % 2 == 1)

    @property
    def n_inner_punctures(self):
        return len(self.inner_punctures)

    @property
    def n_boundary_punctures(self):
        return len(self.punctures) - self.n_inner_punctures

    def face_edges(self, f):
        return tuple(self.side_edge[(f, s)] for s in range(3))

    def side_endpoints(self, side):
        """Punctures at the start and end of a side (clockwise)."""
        f, s = side
        return (self.corner_puncture[(f, (s - 1) % 3)], self.corner_puncture[(f, s)])

    def edge_endpoints(self, e):
        return self.side_endpoints(self.edges[e].sides[0])

    def k_puncture(self, pid):
        """Number of endpoints of each edge at puncture ``pid``."""
        return tuple(self.edge_endpoints(e.id).count(pid) for e in self.edges)

    def k_boundary(self, bid):
        ps = set(self.boundary_components[bid].punctures)
        return tuple(sum(1 for p in self.edge_endpoints(e.id) if p in ps) for e in self.edges)

    def corner_count_matrix(self):
        """a[e][e'] = number of corners where side e' follows side e clockwise."""
        n = self.n_edges
        a = [[0] * n for _ in range(n)]
        for f in range(self.n_faces):
            for k in range(3):
                a[self.side_edge[(f, k)]][self.side_edge[(f, (k + 1) % 3)]] += 1
        return a

    def wp_matrix(self):
        a = self.corner_count_matrix()
        n = self.n_edges
        return [[a[i][j] - a[j][i] for j in range(n)] for i in range(n)]

    def summary(self):
        return {
            "faces": self.n_faces,
            "edges": self.n_edges,
            "inner_edges": len(self.inner_edges),
            "punctures": len(self.punctures),
            "inner_punctures": self.n_inner_punctures,
            "boundary_counts": self.boundary_counts,
            "genus": self.genus,
        }

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<TriangulatedSurface{label} F={self.n_faces} E={self.n_edges} P={len(self.punctures)}>"


_SIDE = re.compile(r"^(\d+)\.(\d+)$")


def load_surface(text, name=None):
    """Parse the line-oriented surface format."""
    n_faces = None
    gluings = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "faces":
            if len(parts) != 2 or not parts[1].isdigit():
                raise SurfaceError("expected 'faces <count>'", lineno)
            if n_faces is not None:
                raise SurfaceError("faces declared twice", lineno)
            n_faces = int(parts[1])
        elif parts[0] == "glue":
            if n_faces is None:
                raise SurfaceError("'glue' before 'faces'", lineno)
            if len(parts) != 3:
                raise SurfaceError("expected 'glue <f>.<s> <g>.<t>'", lineno)
            sides = []
            for tok in parts[1:]:
                m = _SIDE.match(tok)
                if not m:
                    raise SurfaceError(f"bad side {tok!r}", lineno)
                f, s = int(m.group(1)), int(m.group(2))
                if f >= n_faces or s > 2:
                    raise SurfaceError(f"side {tok} out of range", lineno)
                sides.append((f, s))
            gluings.append((tuple(sides[0]), tuple(sides[1]), lineno))
        else:
            raise SurfaceError(f"unknown directive {parts[0]!r}", lineno)
    if not n_faces:
        raise SurfaceError("empty face list")
    used = {}
    for a, b, lineno in gluings:
        if a == b:
            raise SurfaceError(f"side {a[0]}.{a[1]} glued to itself", lineno)
        for side in (a, b):
            if side in used:
                raise SurfaceError(
                    f"side {side[0]}.{side[1]} already glued on line {used[side]}", lineno)
            used[side] = lineno
    return TriangulatedSurface(n_faces, [(a, b) for a, b, _ in gluings], name=name)


def load_surface_file(path):
    with open(path, encoding="utf-8") as fh:
        return load_surface(fh.read(), name=str(path))


def dump_surface(s):
    lines = [f"faces {s.n_faces}"]
    for e in s.inner_edges:
        (f, a), (g, b) = e.sides
        lines.append(f"glue {f}.{a} {g}.{b}")
    return "\n".join(lines) + "\n"


def wp_form(s, e, e2):
    """Weil-Petersson pairing <e, e2> = a_{e,e2} - a_{e2,e}."""
    for x in (e, e2):
        if not (isinstance(x, int) and 0 <= x < s.n_edges):
            raise SurfaceError(f"unknown edge id {x!r}")
    return s.wp_matrix()[e][e2]


# ---------------------------------------------------------------------------
# branched double cover


@dataclass
class CoveredSurface:
    """Hexagon complex of the double cover branched at one point per face.

    Corner regions ``(f, k, c)`` are the two lifts of the region of face
    ``f`` around vertex ``k`` cut out by the dual graph.  Crossing a dual
    half-edge inside a face flips ``c``; crossing an edge near a vertex keeps
    it.  Leaves are then ``(puncture, c)`` and lifted sides are named
    ``(f, s, c)`` by the copy of their first half.
    """

    base: TriangulatedSurface
    lifted_glue: dict
    leaves: tuple
    boundary_components: tuple
    labelings: tuple = field(default_factory=tuple)

    @property
    def n_hexagons(self):
        return self.base.n_faces

    @property
    def branch_points(self):
        return tuple(range(self.base.n_faces))

    @property
    def lifted_punctures(self):
        return self.leaves

    @property
    def n_lifted_edges(self):
        return 2 * self.base.n_edges

    @property
    def euler_characteristic(self):
        return len(self.leaves) - self.n_lifted_edges + self.n_hexagons

    @property
    def genus(self):
        two_g = 2 - self.euler_characteristic - len(self.boundary_components)
        assert two_g % 2 == 0 and two_g >= 0
        return two_g // 2

    def sigma(self, x):
        """Covering involution on lifted corners, sides or leaves."""
        return x[:-1] + (1 - x[-1],)

    def leaf_of_corner(self, f, k, c):
        return (self.base.corner_puncture[(f, k)], c)

    def leaf_label(self, leaf, labeling=1):
        if labeling not in (1, 2):
            raise ValueError("leaf labeling must be 1 or 2")
        return leaf[1] + 1 if labeling == 1 else 2 - leaf[1]

    def leaf_adjacency(self):
        """Pairs of leaves meeting across a lifted dual half-edge."""
        pairs = set()
        for f in range(self.base.n_faces):
            for k in range(3):
                for c in (0, 1):
                    a = self.leaf_of_corner(f, k, c)
                    b = self.leaf_of_corner(f, (k + 1) % 3, 1 - c)
                    pairs.add(tuple(sorted((a, b))))
        return sorted(pairs)


def enumerate_labelings(leaves, adjacency):
    """All 2-colorings of the leaf graph with adjacent leaves distinct."""
    nbrs = {x: [] for x in leaves}
    for a, b in adjacency:
        if a == b:
            return []
        nbrs[a].append(b)
        nbrs[b].append(a)
    comps = []
    color = {}
    for start in leaves:
        if start in color:
            continue
        comp = [start]
        color[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    comp.append(y)
                    stack.append(y)
                elif color[y] == color[x]:
                    return []
        comps.append(comp)
    out = []
    for mask in range(2 ** len(comps)):
        lab = {}
        for i, comp in enumerate(comps):
            flip = (mask >> i) & 1
            for x in comp:
                lab[x] = 1 + (color[x] ^ flip)
        out.append(lab)
    return out


def build_cover(s):
    lifted_glue = {}
    for e in s.inner_edges:
        (f, a), (g, b) = e.sides
        for c in (0, 1):
            lifted_glue[(f, a, c)] = (g, b, 1 - c)
            lifted_glue[(g, b, 1 - c)] = (f, a, c)
    leaves = tuple((p.id, c) for p in s.punctures for c in (0, 1))
    # each lifted boundary side (f, s, c) starts in leaf (p_start, c) and
    # ends in leaf (p_end, 1 - c); boundary leaves chain the sides
    starts, ends = {}, {}
    for e in s.boundary_edges:
        (f, a), = e.sides
        p0, p1 = s.side_endpoints((f, a))
        for c in (0, 1):
            starts[(p0, c)] = (f, a, c)
            ends[(p1, 1 - c)] = (f, a, c)
    uf = _UnionFind(starts.values())
    for leaf, side in ends.items():
        uf.union(side, starts[leaf])
    bcs = tuple(tuple(sorted(g)) for g in sorted(uf.groups()))
    cov = CoveredSurface(s, lifted_glue, leaves, bcs)
    cov.labelings = tuple(enumerate_labelings(leaves, cov.leaf_adjacency()))
    return cov


def cover_genus_formula(s):
    if not s.connected:
        raise SurfaceError("cover genus needs a connected surface")
    val = (4 * s.genus - 3 + s.n_boundary_even + Fraction(3, 2) * s.n_boundary_odd
           + s.n_inner_punctures + Fraction(1, 2) * s.n_boundary_punctures)
    if val.denominator != 1:
        raise SurfaceError(f"non-integral cover genus {val}")
    return int(val)


def cover_genus(s):
    """Genus of the branched double cover, by the closed formula."""
    return cover_genus_formula(s)


# ---------------------------------------------------------------------------
# involutive combinatorial data


@dataclass(frozen=True)
class CombinatorialData:
    """(g, boundary puncture counts, fixed points, half the inner punctures)."""

    g: int
    boundary: tuple
    n_b: int
    s_inner: int

    @property
    def n_boundary(self):
        return len(self.boundary)

    @property
    def n_boundary_odd(self):
        return sum(1 for s in self.boundary if s % 2)

    def n1(self):
        return Fraction(self.n_b + self.n_boundary_odd - 2, 2)

    def n2(self):
        return Fraction(2 * self.g - self.n_b - self.n_boundary_odd + 2, 4)


class UnrealizableData(ValueError):
    pass


def decompose_basic(d):
    """Basic pieces S, E1, E2 and P_s assembling to the involutive surface."""
    n1, n2 = d.n1(), d.n2()
    for name, v in (("n1", n1), ("n2", n2)):
        if v.denominator != 1 or v < 0:
            raise UnrealizableData(f"{name} = {v} is not a non-negative integer")
    out = Counter()
    if d.s_inner:
        out["S"] = d.s_inner
    if n1:
        out["E1"] = int(n1)
    if n2:
        out["E2"] = int(n2)
    for s in d.boundary:
        out[f"P{s}"] += 1
    return out


def reassemble(pieces, boundary):
    """Inverse bookkeeping: (genus, fixed points) of an assembled recipe."""
    n1, n2 = pieces.get("E1", 0), pieces.get("E2", 0)
    n_odd = sum(1 for s in boundary if s % 2)
    return n1 + 2 * n2, 2 * n1 + 2 - n_odd


def cover_data(s):
    """Combinatorial data of the branched cover of ``s``."""
    return CombinatorialData(cover_genus(s), tuple(s.boundary_counts), s.n_faces,
                             s.n_inner_punctures)


def d_boundary(n):
    return (n - 1) // 2 if n % 2 else n // 2


# ---------------------------------------------------------------------------
# Z/2 homology of the punctured surface via the dual graph


@dataclass
class Z2Basis:
    """Cycle basis of H_1(Sigma_P; Z/2).

    The punctured surface retracts onto the dual graph (faces and inner
    edges), so mod-2 cycles are inner-edge sets with even degree at every
    face.  The basis is the fundamental cycles of a spanning tree.
    """

    surface: TriangulatedSurface
    tree_edges: frozenset
    cotree_edges: tuple
    vectors: tuple
    curves: tuple
    peripheral: dict

    @property
    def labels(self):
        return tuple(f"h{i}" for i in range(len(self.vectors)))

    @property
    def rank(self):
        return len(self.vectors)

    def is_cycle(self, vec):
        s = self.surface
        for f in range(s.n_faces):
            deg = sum(vec[s.side_edge[(f, k)]] for k in range(3)
                      if s.edges[s.side_edge[(f, k)]].inner)
            if deg % 2:
                return False
        return True

    def coordinates(self, vec):
        """Coefficients of a mod-2 cycle (indexed by edge) in the basis."""
        vec = tuple(v % 2 if self.surface.edges[i].inner else 0 for i, v in enumerate(vec))
        if not self.is_cycle(vec):
            raise ValueError("edge vector is not a mod 2 cycle")
        coords = tuple(vec[e] for e in self.cotree_edges)
        recon = [0] * len(vec)
        for c, b in zip(coords, self.vectors):
            if c:
                recon = [(x + y) % 2 for x, y in zip(recon, b)]
        assert tuple(recon) == vec
        return coords


def z2_cycle_basis(s):
    from .curves import CombinatorialCurve, Component, peripheral_curve

    if not s.connected:
        raise SurfaceError("cycle basis needs a connected surface")
    adj = {f: [] for f in range(s.n_faces)}
    for e in s.inner_edges:
        (f, a), (g, b) = e.sides
        adj[f].append((e.id, a, g, b))
        adj[g].append((e.id, b, f, a))
    parent = {0: None}
    order = [0]
    for f in order:
        for eid, a, g, b in adj[f]:
            if g not in parent:
                parent[g] = (eid, f, a, b)  # reached g from f via side a -> side b
                order.append(g)
    tree = frozenset(v[0] for v in parent.values() if v)

    def path_to_root(f):
        steps = []
        while parent[f] is not None:
            eid, pf, a, b = parent[f]
            steps.append((f, b, pf, a))  # leave f by side b into pf at side a
            f = pf
        return steps

    cotree, vectors, curves = [], [], []
    for e in s.inner_edges:
        if e.id in tree:
            continue
        (f, a), (g, b) = e.sides
        # closed walk: g up to the common ancestor, down to f, across e to g
        up_g, up_f = path_to_root(g), path_to_root(f)
        while up_g and up_f and up_g[-1] == up_f[-1]:
            up_g.pop()
            up_f.pop()
        down = [(pf, a2, f2, b2) for (f2, b2, pf, a2) in reversed(up_f)]
        walk = up_g + down + [(f, a, g, b)]
        segs = []
        for i, (face, out_side, _, _) in enumerate(walk):
            in_side = walk[i - 1][3]
            segs.append((face, in_side, out_side))
        vec = [0] * s.n_edges
        for face, in_side, out_side in segs:
            vec[s.side_edge[(face, out_side)]] ^= 1
        cotree.append(e.id)
        vectors.append(tuple(vec))
        curves.append(CombinatorialCurve((Component(tuple(segs), closed=True),),
                                         name=f"h{len(curves)}"))
    peripheral = {p.id: peripheral_curve(s, p.id) for p in s.inner_punctures}
    return Z2Basis(s, tree, tuple(cotree), tuple(vectors), tuple(curves), peripheral)


def surface_from_labels(faces, name=None):
    """Build a surface from faces given as three signed edge labels.

    Each face lists ``(label, sign)`` for its sides in cyclic order; sides
    carrying the same label with opposite signs are glued.  A label used
    once is a boundary edge.
    """
    seen = {}
    gluings = []
    for f, face in enumerate(faces):
        if len(face) != 3:
            raise SurfaceError(f"face {f} does not have three sides")
        for k, (label, sign) in enumerate(face):
            if label in seen:
                (g, t), other_sign = seen.pop(label)
                if other_sign == sign:
                    raise SurfaceError(f"edge {label!r} would glue non-orientably")
                gluings.append(((g, t), (f, k)))
            else:
                seen[label] = ((f, k), sign)
    return TriangulatedSurface(len(faces), gluings, name=name)
