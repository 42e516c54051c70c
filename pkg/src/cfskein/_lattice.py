"""Small exact integer linear algebra: echelon bases and coordinates."""

from __future__ import annotations

from fractions import Fraction


def f2_kernel(rows, ncols):
    """Basis of {x in F_2^ncols : rows . x = 0}, as 0/1 tuples."""
    mat = [[v % 2 for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                mat[i] = [(a + b) % 2 for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for i, pc in enumerate(pivots):
            if mat[i][fc]:
                x[pc] = 1
        basis.append(tuple(x))
    return basis


def f2_rank(vectors):
    mat = [[v % 2 for v in r] for r in vectors]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[rank], mat[pr] = mat[pr], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                mat[i] = [(a + b) % 2 for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def f2_solve(basis, target):
    """Coefficients c with sum c_i basis_i = target over F_2, or None."""
    n = len(basis)
    if n == 0:
        return () if not any(v % 2 for v in target) else None
    m = len(target)
    # augmented columns: unknowns are the basis coefficients
    rows = [[basis[j][i] % 2 for j in range(n)] + [target[i] % 2] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(m):
            if i != r and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][n] for i in range(r, m)):
        return None
    sol = [0] * n
    for i, c in enumerate(pivots):
        sol[c] = rows[i][n]
    return tuple(sol)


def echelon_basis(generators):
    """Integer row-echelon basis (Hermite style) of the span of ``generators``."""
    rows = [list(g) for g in generators if any(g)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = []
    col = 0
    while rows and col < ncols:
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            new = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = new
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
        rows = rest
        col += 1
    # reduce entries above pivots into [0, pivot)
    for i, b in enumerate(basis):
        c = next(j for j, v in enumerate(b) if v)
        for k in range(i):
            q = basis[k][c] // b[c]
            if q:
                basis[k] = [a - q * x for a, x in zip(basis[k], b)]
    return [tuple(b) for b in basis]


def echelon_coordinates(basis, v):
    """Integer coordinates of ``v`` in an echelon basis, or None."""
    rem = list(v)
    coords = []
    for b in basis:
        c = next(j for j, x in enumerate(b) if x)
        if rem[c] % b[c]:
            return None
        q = rem[c] // b[c]
        coords.append(q)
        if q:
            rem = [a - q * x for a, x in zip(rem, b)]
    if any(rem):
        return None
    return tuple(coords)


def rational_rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    rank = 0
    ncols = len(rows[0])
    for c in range(ncols):
        pr = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank
