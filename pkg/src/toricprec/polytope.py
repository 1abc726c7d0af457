"""Full-dimensional lattice polytopes given by facet presentations.

A facet is stored as a primitive inward normal ``n`` and an integer offset
``a``; the polytope is ``{p : <p, n_i> + a_i >= 0 for all i}``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import NotFullDimensional, PolytopeError, RedundantFacet, Unbounded
from .polyalg import RationalMatrix, positive_kernel_point, solve_square

Point = tuple[int, ...]


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: int

    def __post_init__(self):
        normal = tuple(int(x) for x in self.normal)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", int(self.offset))
        if not any(normal):
            raise PolytopeError("facet normal must be nonzero")
        if math.gcd(*normal) != 1:
            raise PolytopeError(f"facet normal {normal} is not primitive")

    def distance(self, p: Sequence):
        """Lattice distance ``<p, n> + a`` (exact for int/Fraction input)."""
        return sum(x * n for x, n in zip(p, self.normal)) + self.offset


def _affine_dim(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]]
    if not diffs:
        return 0
    return RationalMatrix(diffs).rank()


def graded_order_key(m: Sequence[int]):
    """Total degree first, then earlier coordinates weigh more (so (1,0) < (0,1))."""
    return (sum(m), tuple(-x for x in m))


class LatticePolytope:
    """A bounded full-dimensional polytope with integer facet data.

    Vertices and lattice points are derived on construction. ``lattice_points``
    may be passed to impose a labeling; it must list exactly the enumerated
    points.
    """

    def __init__(self, facets: Sequence[Facet], lattice_points: Sequence[Sequence[int]] | None = None,
                 name: str | None = None):
        facets = tuple(f if isinstance(f, Facet) else Facet(*f) for f in facets)
        if not facets:
            raise PolytopeError("need at least one facet")
        d = len(facets[0].normal)
        if d < 1 or any(len(f.normal) != d for f in facets):
            raise PolytopeError("facet normals must share one positive dimension")
        seen = {}
        for i, f in enumerate(facets):
            if f.normal in seen:
                raise RedundantFacet(i, f"parallel to facet {seen[f.normal]}")
            seen[f.normal] = i
        self.dim = d
        self.facets = facets
        self.name = name

        normals = RationalMatrix([f.normal for f in facets])
        if normals.rank() < d or positive_kernel_point(normals.transpose()) is None:
            raise Unbounded("facet normals do not positively span the space")

        self.vertices = self._enumerate_vertices()
        if _affine_dim(self.vertices) < d:
            raise NotFullDimensional("polytope has empty interior")
        for i, f in enumerate(facets):
            on = [v for v in self.vertices if f.distance(v) == 0]
            if _affine_dim(on) < d - 1:
                raise RedundantFacet(i)

        found = self._enumerate_lattice_points()
        if lattice_points is None:
            self.lattice_points = tuple(sorted(found, key=graded_order_key))
        else:
            pts = tuple(tuple(int(x) for x in m) for m in lattice_points)
            if len(set(pts)) != len(pts) or set(pts) != set(found):
                raise PolytopeError("supplied lattice-point labeling does not match the polytope")
            self.lattice_points = pts

    # construction helpers -------------------------------------------------
    def _enumerate_vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        d = self.dim
        verts = set()
        for idx in itertools.combinations(range(len(self.facets)), d):
            A = [self.facets[i].normal for i in idx]
            b = [-self.facets[i].offset for i in idx]
            p = solve_square(A, b)
            if p is None:
                continue
            if all(f.distance(p) >= 0 for f in self.facets):
                verts.add(p)
        return tuple(sorted(verts))

    def _enumerate_lattice_points(self) -> list[Point]:
        lo = [math.floor(min(v[k] for v in self.vertices)) for k in range(self.dim)]
        hi = [math.ceil(max(v[k] for v in self.vertices)) for k in range(self.dim)]
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return [m for m in itertools.product(*ranges)
                if all(f.distance(m) >= 0 for f in self.facets)]

    # derived data ---------------------------------------------------------
    @property
    def num_facets(self) -> int:
        return len(self.facets)

    @property
    def num_points(self) -> int:
        return len(self.lattice_points)

    @cached_property
    def distance_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Rows indexed by facets, columns by lattice points: ``h_i(m_j)``."""
        return tuple(tuple(f.distance(m) for m in self.lattice_points) for f in self.facets)

    @cached_property
    def facet_normal_sum(self) -> tuple[int, ...]:
        return tuple(sum(f.normal[k] for f in self.facets) for k in range(self.dim))

    @cached_property
    def offset_sum(self) -> int:
        return sum(f.offset for f in self.facets)

    @cached_property
    def incidence(self) -> tuple[frozenset[int], ...]:
        """For each vertex, the facets through it (generators of its normal cone)."""
        return tuple(frozenset(i for i, f in enumerate(self.facets) if f.distance(v) == 0)
                     for v in self.vertices)

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def contains(self, p: Sequence) -> bool:
        return all(f.distance(p) >= 0 for f in self.facets)

    def is_interior(self, p: Sequence) -> bool:
        return all(f.distance(p) > 0 for f in self.facets)

    def centroid(self) -> tuple[Fraction, ...]:
        s = len(self.lattice_points)
        return tuple(Fraction(sum(m[k] for m in self.lattice_points), s) for k in range(self.dim))

    def __repr__(self):
        label = self.name or "LatticePolytope"
        return f"<{label}: dim={self.dim}, facets={self.num_facets}, points={self.num_points}>"


def polytope_from_facets(facets, lattice_points=None, name=None) -> LatticePolytope:
    return LatticePolytope(facets, lattice_points=lattice_points, name=name)


def facet_normal_sum(P: LatticePolytope) -> tuple[int, ...]:
    return P.facet_normal_sum


def primitive_collections(P: LatticePolytope) -> list[frozenset[int]]:
    """Inclusion-minimal facet sets not contained in any vertex's incident set.

    Brute force over all subsets; fine for the facet counts used here.
    """
    cones = P.incidence

    def in_some_cone(S):
        return any(S <= c for c in cones)

    result = []
    r = P.num_facets
    for size in range(1, r + 1):
        for combo in itertools.combinations(range(r), size):
            S = frozenset(combo)
            if in_some_cone(S):
                continue
            if all(in_some_cone(S - {i}) for i in S):
                result.append(S)
    return result


# ---------------------------------------------------------------------------
# catalog constructors
# ---------------------------------------------------------------------------

def make_simplex(k: int, d: int) -> LatticePolytope:
    """``k`` times the standard ``d``-simplex."""
    if k < 1 or d < 1:
        raise ValueError("simplex needs k >= 1 and d >= 1")
    facets = [Facet((-1,) * d, k)]
    for i in range(d):
        e = [0] * d
        e[i] = 1
        facets.append(Facet(tuple(e), 0))
    return LatticePolytope(facets, name=f"{k}Delta_{d}")


def make_segment() -> LatticePolytope:
    """The segment [0, 2], facets listed as x >= 0 then 2 - x >= 0."""
    return LatticePolytope([Facet((1,), 0), Facet((-1,), 2)], name="P1_segment")


def make_square() -> LatticePolytope:
    """Unit square with facets s, t, 1-s, 1-t and points (0,0),(1,0),(0,1),(1,1)."""
    return LatticePolytope(
        [Facet((1, 0), 0), Facet((0, 1), 0), Facet((-1, 0), 1), Facet((0, -1), 1)],
        lattice_points=[(0, 0), (1, 0), (0, 1), (1, 1)], name="square")


def make_product(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    """Cartesian product; lattice points ordered with the first factor varying fastest."""
    if not isinstance(P, LatticePolytope) or not isinstance(Q, LatticePolytope):
        raise TypeError("factors must be LatticePolytope instances")
    if P.dim < 1 or Q.dim < 1:
        raise NotFullDimensional("product factors must be full-dimensional")
    facets = [Facet(f.normal + (0,) * Q.dim, f.offset) for f in P.facets]
    facets += [Facet((0,) * P.dim + g.normal, g.offset) for g in Q.facets]
    points = [m + mm for mm in Q.lattice_points for m in P.lattice_points]
    name = f"{P.name or 'P'}x{Q.name or 'Q'}"
    return LatticePolytope(facets, lattice_points=points, name=name)


def product_weights(w: Sequence, w2: Sequence) -> tuple:
    """Weights on a product, in the order used by :func:`make_product`."""
    return tuple(a * b for b in w2 for a in w)


def make_trapezoid(a: int, b: int, dd: int) -> LatticePolytope:
    """Conv(0, (a+dd*b) e1, b e2, a e1 + b e2).

    Facets are x >= 0, y >= 0, the slanted edge, then y <= b; lattice points
    run along rows of increasing y, so (1,1,1) reproduces the usual labeling
    m1=(0,0), m2=(1,0), m3=(2,0), m4=(0,1), m5=(1,1).
    """
    if min(a, b, dd) < 1:
        raise ValueError("trapezoid parameters must be positive")
    facets = [Facet((1, 0), 0), Facet((0, 1), 0), Facet((-1, -dd), a + dd * b), Facet((0, -1), b)]
    P = LatticePolytope(facets, name=f"trapezoid({a},{b},{dd})")
    points = sorted(P.lattice_points, key=lambda m: (m[1], m[0]))
    return LatticePolytope(facets, lattice_points=points, name=P.name)


def make_graphical_model() -> LatticePolytope:
    """The 5-dimensional polytope of the path graph 1 - 2 - 3 on binary variables.

    Facet and lattice-point labels are chosen so that the distance matrix is
    the 0/1 design matrix of the model (columns p000, p001, ..., p111).
    """
    def e(*idx):
        v = [0] * 5
        for i in idx:
            v[i - 1] = 1
        return tuple(v)

    def n(**kw):
        v = [0] * 5
        for k, val in kw.items():
            v[int(k[1:]) - 1] = val
        return tuple(v)

    facets = [
        Facet(n(e2=-1, e5=-1), 1),
        Facet(n(e4=-1, e5=1), 0),
        Facet(n(e2=1), 0),
        Facet(n(e4=1), 0),
        Facet(n(e1=-1, e5=-1), 1),
        Facet(n(e1=1), 0),
        Facet(n(e3=-1, e5=1), 0),
        Facet(n(e3=1), 0),
    ]
    points = [e(), e(1), e(5), e(3, 5), e(2), e(1, 2), e(4, 5), e(3, 4, 5)]
    return LatticePolytope(facets, lattice_points=points, name="graphical")


def polygon_from_vertices(vertices: Sequence[Sequence[int]]) -> LatticePolytope:
    """Lattice polygon from its vertices listed counter-clockwise (strictly convex)."""
    vs = [tuple(int(x) for x in v) for v in vertices]
    if len(vs) < 3:
        raise NotFullDimensional("a polygon needs at least three vertices")
    facets = []
    for (x0, y0), (x1, y1) in zip(vs, vs[1:] + vs[:1]):
        dx, dy = x1 - x0, y1 - y0
        g = math.gcd(dx, dy)
        nx, ny = -dy // g, dx // g  # left normal points inward for ccw order
        facets.append(Facet((nx, ny), -(nx * x0 + ny * y0)))
    return LatticePolytope(facets)
