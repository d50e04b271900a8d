"""Newton polyhedra of m-primary monomial ideals.

NP(I) = conv(gens(I)) + R^d_{>=0}.  Facets come from an exact double
description run on the homogenized cone spanned by (1, g) for generators g
and (0, e_k) for the recession directions.  Everything is integer or
Fraction arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import Sequence

import numpy as np

from lechlab._exact import affine_rank, det, rank
from lechlab.monomial import (
    DimensionMismatch,
    MonomialIdeal,
    UnsupportedDimension,
    require_m_primary,
    unit_vector,
)

#: Largest dimension for which facets (and hence covolumes) are enumerated.
MAX_HULL_DIM = 4


@dataclass(frozen=True)
class Facet:
    """The inequality <normal, v> >= offset."""

    normal: tuple[int, ...]
    offset: int

    def value(self, v: Sequence) -> Fraction | int:
        return sum(n * x for n, x in zip(self.normal, v))

    def holds(self, v: Sequence) -> bool:
        return self.value(v) >= self.offset

    def tight(self, v: Sequence) -> bool:
        return self.value(v) == self.offset

    @property
    def is_coordinate(self) -> bool:
        return self.offset == 0


@dataclass(frozen=True)
class NewtonPolyhedron:
    dim: int
    facets: tuple[Facet, ...]
    vertices: tuple[tuple[int, ...], ...]
    source_gens: tuple[tuple[int, ...], ...]

    @property
    def compact_facets(self) -> tuple[Facet, ...]:
        return tuple(f for f in self.facets if f.offset > 0)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [list(f.normal) + [f.offset] for f in self.facets],
            "vertices": [list(v) for v in self.vertices],
            "gens": [list(g) for g in self.source_gens],
        }


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _normalize(z: list[int]) -> tuple[int, ...]:
    g = 0
    for x in z:
        g = gcd(g, x)
    return tuple(x // g for x in z) if g > 1 else tuple(z)


def _dual_extreme_rays(points: list[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays z = (z_0, n) of {z : <a, z> >= 0 for all rows a}.

    Rows are (1, p) for the points and (0, e_k) for the recession rays.
    points[0] must be a pure power; it seeds the initial simplicial cone.
    """
    D = dim + 1
    rows = [(1,) + p for p in points] + [(0,) + unit_vector(dim, k) for k in range(dim)]
    ray_rows = list(range(len(points), len(points) + dim))
    seed = points[0]

    # Initial cone cut out by row 0 and the recession rows: its extreme rays are
    # (1, 0) and (-seed_k, e_k).
    rays: list[tuple[int, ...]] = [(1,) + (0,) * dim]
    zero: list[int] = [sum(1 << r for r in ray_rows)]
    for k in range(dim):
        rays.append((-seed[k],) + unit_vector(dim, k))
        zero.append((1 << 0) | sum(1 << r for j, r in enumerate(ray_rows) if j != k))

    for i in range(1, len(points)):
        a = rows[i]
        vals = [_dot(a, z) for z in rays]
        neg = [j for j, v in enumerate(vals) if v < 0]
        bit = 1 << i
        if not neg:
            for j, v in enumerate(vals):
                if v == 0:
                    zero[j] |= bit
            continue
        pos = [j for j, v in enumerate(vals) if v > 0]
        new_rays, new_zero = [], []
        for p in pos:
            for q in neg:
                common = zero[p] & zero[q]
                if bin(common).count("1") < D - 2:
                    continue
                # combinatorial adjacency test
                if any(r != p and r != q and zero[r] & common == common for r in range(len(rays))):
                    continue
                vp, vq = vals[p], vals[q]
                z = [vp * x - vq * y for x, y in zip(rays[q], rays[p])]
                new_rays.append(_normalize(z))
                new_zero.append(common | bit)
        keep = [j for j, v in enumerate(vals) if v >= 0]
        for j in keep:
            if vals[j] == 0:
                zero[j] |= bit
        rays = [rays[j] for j in keep] + new_rays
        zero = [zero[j] for j in keep] + new_zero
    return rays


def _candidate_order(gens: Sequence[tuple[int, ...]], pp: Sequence[int]) -> list[tuple[int, ...]]:
    # Pure powers first, then by normalized degree: likely vertices early, so
    # later redundant rows cost only a sign check.
    return sorted(gens, key=lambda g: (sum(1 for a in g if a) != 1, sum(Fraction(a, p) for a, p in zip(g, pp)), g))


def build_polyhedron(I: MonomialIdeal) -> NewtonPolyhedron:
    pp = require_m_primary(I)
    d = I.dim
    if d > MAX_HULL_DIM:
        raise UnsupportedDimension(f"facet enumeration is limited to d <= {MAX_HULL_DIM}; got d = {d}")
    points = _candidate_order(I.gens, pp)
    facets = []
    for z in _dual_extreme_rays(points, d):
        normal = z[1:]
        if not any(normal):
            continue  # the homogenizing face x_0 >= 0
        g = 0
        for x in normal:
            g = gcd(g, x)
        facets.append(Facet(tuple(x // g for x in normal), -z[0] // g))
    facets.sort(key=lambda f: (f.offset, f.normal))
    vertices = []
    for g in I.gens:
        tight = [f.normal for f in facets if f.tight(g)]
        if len(tight) >= d and rank(tight) == d:
            vertices.append(g)
    return NewtonPolyhedron(d, tuple(facets), tuple(vertices), I.gens)


def in_polyhedron(P: NewtonPolyhedron, v: Sequence) -> bool:
    if len(v) != P.dim:
        raise DimensionMismatch(f"point {tuple(v)} is not of length {P.dim}")
    if any(x < 0 for x in v):
        return False
    return all(f.holds(v) for f in P.facets)


def dominates_convex_combination(gens: Sequence[Sequence[int]], v: Sequence) -> bool:
    """Is there a convex combination c of ``gens`` with c <= v componentwise?

    Exact phase-one simplex (Bland's rule) on
    sum_i lam_i g_i + s = v,  sum_i lam_i + a = 1,  lam, s, a >= 0,
    minimizing the artificial a.  Independent of any facet data.
    """
    v = [Fraction(x) for x in v]
    if any(x < 0 for x in v):
        return False
    if any(all(a <= b for a, b in zip(g, v)) for g in gens):
        return True
    m, d = len(gens), len(v)
    # columns: lam_0..lam_{m-1}, s_0..s_{d-1}, a
    ncol = m + d + 1
    tab = []
    for k in range(d):
        row = [Fraction(g[k]) for g in gens] + [Fraction(int(j == k)) for j in range(d)] + [Fraction(0)]
        tab.append(row + [v[k]])
    tab.append([Fraction(1)] * m + [Fraction(0)] * d + [Fraction(1), Fraction(1)])
    basis = [m + k for k in range(d)] + [m + d]
    cost = [Fraction(0)] * (m + d) + [Fraction(1)]
    while True:
        # reduced costs
        duals = [cost[b] for b in basis]
        entering = None
        for j in range(ncol):
            if j in basis:
                continue
            rc = cost[j] - sum(duals[i] * tab[i][j] for i in range(len(basis)))
            if rc < 0:
                entering = j
                break
        if entering is None:
            break
        best = None
        for i, row in enumerate(tab):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded; cannot happen for a >= 0 objective
            break
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [x / piv for x in tab[r]]
        for i in range(len(tab)):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        basis[r] = entering
    artificial = sum(tab[i][-1] for i, b in enumerate(basis) if b == m + d)
    return artificial == 0


def _box_points(pp: Sequence[int]) -> np.ndarray:
    grids = np.indices(tuple(pp)).reshape(len(pp), -1).T
    return grids.astype(np.int64)


def integral_closure(I: MonomialIdeal) -> MonomialIdeal:
    """Monomials whose exponents lie in NP(I)."""
    pp = require_m_primary(I)
    d = I.dim
    pts = _box_points(pp)
    if d <= MAX_HULL_DIM:
        P = build_polyhedron(I)
        normals = np.array([f.normal for f in P.compact_facets], dtype=np.int64)
        offsets = np.array([f.offset for f in P.compact_facets], dtype=np.int64)
        inside = (pts @ normals.T >= offsets).all(axis=1)
        members = [tuple(int(a) for a in p) for p in pts[inside]]
    else:
        members = [tuple(int(a) for a in p) for p in pts if dominates_convex_combination(I.gens, p)]
    members += [unit_vector(d, k, p) for k, p in enumerate(pp)]
    return MonomialIdeal(d, tuple(members))


def is_integrally_closed(I: MonomialIdeal) -> bool:
    return integral_closure(I) == I


def _pulling_triangulation(face: frozenset, k: int, verts, facet_sets, dims: dict) -> list[tuple[int, ...]]:
    """Simplices (as vertex-index tuples) triangulating a k-dimensional face."""
    if k == 0:
        return [tuple(face)]
    apex = min(face, key=lambda i: verts[i])
    subfaces = set()
    for fs in facet_sets:
        sub = face & fs
        if apex in sub or len(sub) < k or sub == face or sub in subfaces:
            continue
        if sub not in dims:
            dims[sub] = affine_rank([verts[i] for i in sorted(sub)])
        if dims[sub] == k - 1:
            subfaces.add(sub)
    out = []
    for sub in sorted(subfaces, key=sorted):
        for simplex in _pulling_triangulation(sub, k - 1, verts, facet_sets, dims):
            out.append((apex,) + simplex)
    return out


def normalized_covolume(P: NewtonPolyhedron) -> int:
    """d! times the volume of R^d_{>=0} minus NP.

    The complement is star-shaped from the origin and bounded by the compact
    facets, so it is the union of the cones from 0 over those facets; each
    facet is triangulated by pulling its lexicographically smallest vertex.
    """
    d = P.dim
    verts = P.vertices
    facet_sets = [frozenset(i for i, v in enumerate(verts) if f.tight(v)) for f in P.facets]
    dims: dict = {}
    total = 0
    for f, fs in zip(P.facets, facet_sets):
        if f.offset == 0:
            continue
        for simplex in _pulling_triangulation(fs, d - 1, verts, facet_sets, dims):
            total += abs(det([verts[i] for i in simplex]))
    return total


def covolume(I: MonomialIdeal) -> Fraction:
    P = build_polyhedron(I)
    return Fraction(normalized_covolume(P), factorial(I.dim))


def box_covolume_oracle(I: MonomialIdeal) -> Fraction:
    """vol(Box) - vol(NP cap Box) with the convex body triangulated directly.

    Slow cross-check for the cone decomposition: the region NP cap Box is a
    polytope whose vertices are found by brute force over d-subsets of its
    facet inequalities.
    """
    pp = require_m_primary(I)
    d = I.dim
    P = build_polyhedron(I)
    ineqs = [(f.normal, f.offset) for f in P.facets]
    ineqs += [(tuple(-x for x in unit_vector(d, k)), -p) for k, p in enumerate(pp)]
    verts = set()
    for combo in itertools.combinations(ineqs, d):
        A = [list(n) for n, _ in combo]
        D = det(A)
        if D == 0:
            continue
        # Cramer's rule
        sol = []
        for c in range(d):
            Ac = [row[:c] + [off] + row[c + 1:] for row, (_, off) in zip(A, combo)]
            sol.append(Fraction(det(Ac), D))
        if all(sum(n * x for n, x in zip(nn, sol)) >= off for nn, off in ineqs):
            verts.add(tuple(sol))
    verts = sorted(verts)
    facet_sets = [frozenset(i for i, v in enumerate(verts) if sum(n * x for n, x in zip(nn, v)) == off) for nn, off in ineqs]
    apex = 0
    dims: dict = {}
    vol = Fraction(0)
    for fs in facet_sets:
        if apex in fs or affine_rank([verts[i] for i in sorted(fs)]) != d - 1:
            continue
        for simplex in _pulling_triangulation(fs, d - 1, verts, facet_sets, dims):
            rows = [[a - b for a, b in zip(verts[i], verts[apex])] for i in simplex]
            vol += abs(_fraction_det(rows))
    box = 1
    for p in pp:
        box *= p
    return box - vol / factorial(d)


def _fraction_det(rows: list[list[Fraction]]) -> Fraction:
    den = 1
    for r in rows:
        for x in r:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return Fraction(det([[int(x * den) for x in r] for r in rows]), den ** len(rows))
