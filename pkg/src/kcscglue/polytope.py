"""Lattice polytopes of pluri-anticanonical polarizations.

The k-anticanonical polytope of a complete simplicial fan is the region
<u, v_rho> >= -k over all rays.  Vertices come one per maximal cone (the
moment image of the chart's torus-fixed point); faces come from facet
incidence; barycenters are exact volume-weighted centroids over a pulling
triangulation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact_linalg import (
    RationalMatrix,
    frac,
    positive_kernel_witness,
    rank,
    rational_determinant,
    solve_square,
)
from .toric_lattice import Cone, Fan

QVector = tuple[Fraction, ...]


class UnboundedRegionError(ValueError):
    """H-representation region is unbounded (fan not complete)."""


class DegeneratePolytopeError(ValueError):
    """Polytope is not full-dimensional."""


@dataclass(frozen=True)
class LatticePolytope:
    """H-representation <u, normal_i> >= offset_i plus derived exact vertices.

    For anticanonical polytopes every offset equals -k.  facet_vertices[i]
    lists (indices of) the vertices saturating inequality i.
    """

    dim: int
    k: Optional[int]
    facet_normals: tuple[tuple[int, ...], ...]
    facet_offsets: tuple[Fraction, ...]
    vertices: tuple[QVector, ...]
    facet_vertices: tuple[tuple[int, ...], ...]

    def contains(self, point: Sequence) -> bool:
        p = [frac(x) for x in point]
        return all(
            sum(n_i * x_i for n_i, x_i in zip(n, p)) >= o
            for n, o in zip(self.facet_normals, self.facet_offsets)
        )


def _check_bounded(dim: int, normals: Sequence[tuple[int, ...]]) -> None:
    """The region is bounded iff the normals positively span R^m."""
    mat = RationalMatrix.from_rows([[n[i] for n in normals] for i in range(dim)])
    if rank(mat) < dim or positive_kernel_witness(mat) is None:
        raise UnboundedRegionError(
            "facet normals do not positively span the ambient space"
        )


def _assemble(
    dim: int,
    k: Optional[int],
    normals: Sequence[tuple[int, ...]],
    offsets: Sequence[Fraction],
    points: Sequence[QVector],
) -> LatticePolytope:
    vertices = sorted(set(points))
    facet_vertices = []
    for n, o in zip(normals, offsets):
        on_facet = tuple(
            i
            for i, v in enumerate(vertices)
            if sum(ni * vi for ni, vi in zip(n, v)) == o
        )
        facet_vertices.append(on_facet)
    return LatticePolytope(
        dim=dim,
        k=k,
        facet_normals=tuple(tuple(n) for n in normals),
        facet_offsets=tuple(offsets),
        vertices=tuple(vertices),
        facet_vertices=tuple(facet_vertices),
    )


def _cone_candidate(k: int, cone: Cone) -> QVector:
    mat = RationalMatrix.from_rows([list(g) for g in cone.generators])
    try:
        return solve_square(mat, [-k] * len(cone.generators))
    except ValueError:
        raise ValueError("degenerate cone: singular vertex system")


def vertex_for_cone(fan: Fan, k: int, cone: Cone) -> QVector:
    """The unique u with <u, v_i> = -k over the cone's generators.

    This is the moment image of the torus-fixed point of the cone's chart;
    it must satisfy every facet inequality of the k-anticanonical polytope.
    """
    u = _cone_candidate(k, cone)
    for ray in fan.rays:
        if sum(r * x for r, x in zip(ray, u)) < -k:
            raise ValueError(f"cone vertex {u} violates facet of ray {ray}")
    return u


def anticanonical_polytope(fan: Fan, k: int) -> LatticePolytope:
    """Vertices of {<u, v_rho> >= -k} via the one-candidate-per-cone shortcut
    (valid for complete simplicial fans; the general m-subset enumeration is
    kept as a test oracle in polytope_from_h_rep)."""
    if k < 1:
        raise ValueError("anticanonical multiple k must be >= 1")
    _check_bounded(fan.dim, fan.rays)
    offsets = [Fraction(-k)] * len(fan.rays)
    points = []
    for _, cone in fan.cones():
        u = _cone_candidate(k, cone)
        if all(
            sum(r * x for r, x in zip(ray, u)) >= -k for ray in fan.rays
        ):
            points.append(u)
    if not points:
        raise ValueError("no feasible cone vertices (inconsistent fan/k)")
    return _assemble(fan.dim, k, fan.rays, offsets, points)


def polytope_from_h_rep(
    normals: Sequence[Sequence[int]], offsets: Sequence
) -> LatticePolytope:
    """General vertex enumeration over all m-subsets of facets (oracle path)."""
    from itertools import combinations

    normals = [tuple(int(x) for x in n) for n in normals]
    if not normals:
        raise ValueError("no facets")
    dim = len(normals[0])
    offs = [frac(o) for o in offsets]
    _check_bounded(dim, normals)
    points = []
    for subset in combinations(range(len(normals)), dim):
        mat = RationalMatrix.from_rows([list(normals[i]) for i in subset])
        try:
            u = solve_square(mat, [offs[i] for i in subset])
        except ValueError:
            continue
        if all(
            sum(ni * xi for ni, xi in zip(n, u)) >= o for n, o in zip(normals, offs)
        ):
            points.append(u)
    if not points:
        raise ValueError("empty polytope")
    ks = {-o for o in offs}
    k = int(next(iter(ks))) if len(ks) == 1 and next(iter(ks)).denominator == 1 else None
    return _assemble(dim, k, normals, offs, points)


def moment_assignment(fan: Fan, k: int) -> list[tuple[str, QVector]]:
    """Cone label -> polytope vertex correspondence, in fan order."""
    return [(label, vertex_for_cone(fan, k, cone)) for label, cone in fan.cones()]


def _affine_dim(points: Sequence[QVector]) -> int:
    if not points:
        return -1
    base = points[0]
    if len(points) == 1:
        return 0
    rows = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return rank(RationalMatrix.from_rows(rows))


def _face_lattice(p: LatticePolytope) -> dict[frozenset[int], int]:
    """All faces as vertex-index sets (via facet-intersection closure),
    mapped to their affine dimension.  Includes the polytope itself."""
    faces: set[frozenset[int]] = {frozenset(range(len(p.vertices)))}
    frontier = {frozenset(fv) for fv in p.facet_vertices if fv}
    faces |= frontier
    while True:
        new = set()
        for f in frontier:
            for g in {frozenset(fv) for fv in p.facet_vertices}:
                h = f & g
                if h and h not in faces:
                    new.add(h)
        if not new:
            break
        faces |= new
        frontier = new
    return {f: _affine_dim([p.vertices[i] for i in f]) for f in faces}


def faces(p: LatticePolytope, d: int) -> list[tuple[QVector, ...]]:
    """Faces of dimension d as sorted vertex tuples, deterministically ordered."""
    lattice = _face_lattice(p)
    out = []
    for f, fd in lattice.items():
        if fd == d:
            out.append(tuple(sorted(p.vertices[i] for i in f)))
    return sorted(out)


def _pulling_triangulation(
    p: LatticePolytope, lattice: dict[frozenset[int], int]
) -> list[tuple[int, ...]]:
    """Triangulate by recursively coning the lex-smallest vertex over the
    far subfaces; returns simplices as vertex-index tuples."""
    by_dim: dict[int, list[frozenset[int]]] = {}
    for f, d in lattice.items():
        by_dim.setdefault(d, []).append(f)

    cache: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def tri(face: frozenset[int]) -> list[tuple[int, ...]]:
        if face in cache:
            return cache[face]
        d = lattice[face]
        if d == 0:
            result = [tuple(face)]
        else:
            apex = min(face, key=lambda i: p.vertices[i])
            result = []
            for sub in by_dim.get(d - 1, []):
                if sub < face and apex not in sub:
                    for simplex in tri(sub):
                        result.append((apex,) + simplex)
        cache[face] = result
        return result

    top = frozenset(range(len(p.vertices)))
    return tri(top)


def polytope_barycenter(p: LatticePolytope) -> QVector:
    """Exact volume-weighted centroid.

    Each simplex of the pulling triangulation contributes its vertex average
    weighted by |det| of its edge matrix (the 1/m! normalization cancels).
    """
    m = p.dim
    if _affine_dim(p.vertices) < m:
        raise DegeneratePolytopeError("polytope is not full-dimensional")
    lattice = _face_lattice(p)
    total = Fraction(0)
    acc = [Fraction(0)] * m
    for simplex in _pulling_triangulation(p, lattice):
        verts = [p.vertices[i] for i in simplex]
        base = verts[0]
        edges = RationalMatrix.from_rows(
            [[v[i] - base[i] for i in range(m)] for v in verts[1:]]
        )
        w = abs(rational_determinant(edges))
        if w == 0:
            continue
        total += w
        for i in range(m):
            acc[i] += w * sum(v[i] for v in verts) / (m + 1)
    if total == 0:
        raise DegeneratePolytopeError("zero volume")
    return tuple(a / total for a in acc)


def subset_barycenter(points: Sequence[Sequence]) -> QVector:
    """Exact arithmetic mean of a nonempty list of points."""
    if not points:
        raise ValueError("empty point list")
    pts = [[frac(x) for x in p] for p in points]
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ValueError("points of mixed dimension")
    n = len(pts)
    return tuple(sum(p[i] for p in pts) / n for i in range(dim))
