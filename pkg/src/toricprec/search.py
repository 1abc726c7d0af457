"""Exhaustive strict-linear-precision check over small lattice polygons.

Polygons with vertices in ``[0, N]^2`` are enumerated up to translation
(only the representative touching both axes is kept). Unimodular
equivalence is not quotiented out, so GL2(Z)-images of one polygon show up
separately.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import atan2
from typing import Iterator

from .polyalg import format_rational
from .polytope import LatticePolytope, make_trapezoid, polygon_from_vertices
from .precision import solve_slp_weights

TRIANGLE_NORMALS = Counter([(1, 0), (0, 1), (-1, -1)])
RECTANGLE_NORMALS = Counter([(1, 0), (0, 1), (-1, 0), (0, -1)])


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_lattice_polygons(max_coord: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Vertex tuples (counter-clockwise, starting at the lowest-leftmost vertex)
    of every strictly convex lattice polygon in ``[0, max_coord]^2`` that
    touches both coordinate axes."""
    grid = [(x, y) for y in range(max_coord + 1) for x in range(max_coord + 1)]
    for v0 in grid:
        if v0[1] != 0:
            continue  # some vertex must lie on y = 0; the lowest one is v0
        above = [p for p in grid if (p[1], p[0]) > (v0[1], v0[0])]
        above.sort(key=lambda p: (atan2(p[1] - v0[1], p[0] - v0[0]),
                                  (p[0] - v0[0]) ** 2 + (p[1] - v0[1]) ** 2))

        def extend(chain):
            last = chain[-1]
            if len(chain) >= 3 and _cross(chain[-2], last, v0) > 0:
                if min(p[0] for p in chain) == 0:
                    yield tuple(chain)
            for c in above:
                if _cross(v0, last, c) <= 0 and len(chain) > 1:
                    continue  # polar angle must strictly increase
                if len(chain) >= 2 and _cross(chain[-2], last, c) <= 0:
                    continue
                if len(chain) == 1 and c == last:
                    continue
                yield from extend(chain + [c])

        yield from extend([v0])


def unimodular_class(normals) -> str | None:
    """'triangle' / 'rectangle' if a GL2(Z) map sends the normal multiset to that of
    the standard triangle or the unit square, else None."""
    normals = list(normals)
    target = {3: ("triangle", TRIANGLE_NORMALS), 4: ("rectangle", RECTANGLE_NORMALS)}.get(len(normals))
    if target is None:
        return None
    label, ref = target
    for a, b in permutations(normals, 2):
        det = a[0] * b[1] - a[1] * b[0]
        if abs(det) != 1:
            continue
        # integer inverse of the matrix with columns a, b sends a -> e1, b -> e2
        inv = ((b[1] * det, -b[0] * det), (-a[1] * det, a[0] * det))
        image = Counter((inv[0][0] * n[0] + inv[0][1] * n[1], inv[1][0] * n[0] + inv[1][1] * n[1])
                        for n in normals)
        if image == ref:
            return label
    return None


@dataclass
class PolygonResult:
    vertices: tuple[tuple[int, int], ...]
    n_P: tuple[int, int]
    weights: tuple[Fraction, ...] | None
    fan_class: str | None

    @property
    def slp(self) -> bool:
        return self.weights is not None

    def to_dict(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "n_P": list(self.n_P), "slp": self.slp,
                "weights": None if self.weights is None else [format_rational(x) for x in self.weights],
                "fan_class": self.fan_class}


@dataclass
class SearchReport:
    max_coord: int
    polygons: int
    slp_positive: list[PolygonResult] = field(default_factory=list)
    trapezoids_checked: list[dict] = field(default_factory=list)

    @property
    def classification_ok(self) -> bool:
        return all(r.fan_class in ("triangle", "rectangle") for r in self.slp_positive)

    @property
    def trapezoids_ok(self) -> bool:
        return all(not t["slp"] for t in self.trapezoids_checked)

    @property
    def ok(self) -> bool:
        return self.classification_ok and self.trapezoids_ok

    def to_dict(self) -> dict:
        return {"max_coord": self.max_coord, "polygons": self.polygons,
                "slp_positive_count": len(self.slp_positive),
                "slp_positive": [r.to_dict() for r in self.slp_positive],
                "trapezoids": self.trapezoids_checked,
                "classification_ok": self.classification_ok, "trapezoids_ok": self.trapezoids_ok}


def check_polygon(vertices) -> PolygonResult:
    P = polygon_from_vertices(vertices)
    weights = solve_slp_weights(P)
    return PolygonResult(tuple(vertices), P.facet_normal_sum, weights,
                         unimodular_class(f.normal for f in P.facets))


def _vertex_key(P: LatticePolytope) -> frozenset:
    return frozenset(tuple(int(x) for x in v) for v in P.vertices)


def search_polygons(max_coord: int) -> SearchReport:
    if not 1 <= max_coord <= 6:
        raise ValueError("max_coord must be between 1 and 6")
    seen: dict[frozenset, PolygonResult] = {}
    for verts in convex_lattice_polygons(max_coord):
        key = frozenset(verts)
        if key not in seen:
            seen[key] = check_polygon(verts)
    positives = sorted((r for r in seen.values() if r.slp), key=lambda r: sorted(r.vertices))
    report = SearchReport(max_coord, len(seen), positives)
    for a in range(1, max_coord + 1):
        for b in range(1, max_coord + 1):
            for dd in range(1, max_coord + 1):
                if a + dd * b > max_coord:
                    continue
                T = make_trapezoid(a, b, dd)
                hit = seen.get(_vertex_key(T))
                report.trapezoids_checked.append({
                    "params": [a, b, dd], "enumerated": hit is not None,
                    "slp": hit.slp if hit is not None else solve_slp_weights(T) is not None})
    return report
