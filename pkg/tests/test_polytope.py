from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from toricprec.errors import NotFullDimensional, PolytopeError, RedundantFacet, Unbounded
from toricprec.polytope import (Facet, LatticePolytope, facet_normal_sum, make_graphical_model,
                                make_product, make_segment, make_simplex, make_square,
                                make_trapezoid, polygon_from_vertices, primitive_collections)

GRAPHICAL_DESIGN = (
    (1, 1, 0, 0, 0, 0, 0, 0),
    (0, 0, 1, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 1, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, 1),
    (1, 0, 0, 0, 1, 0, 0, 0),
    (0, 1, 0, 0, 0, 1, 0, 0),
    (0, 0, 1, 0, 0, 0, 1, 0),
    (0, 0, 0, 1, 0, 0, 0, 1),
)


def test_square_from_facets():
    P = LatticePolytope([((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)])
    assert len(P.vertices) == 4
    assert P.lattice_points == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert facet_normal_sum(P) == (0, 0)


def test_trapezoid_points_and_normals():
    P = make_trapezoid(1, 1, 1)
    assert P.lattice_points == ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1))
    assert P.facet_normal_sum == (0, -1)
    assert [f.distance((F(1, 3), F(1, 4))) for f in P.facets] == [F(1, 3), F(1, 4), 2 - F(1, 3) - F(1, 4), F(3, 4)]


def test_trapezoid_family_vertices():
    assert set(make_trapezoid(2, 1, 1).vertices) == {(0, 0), (3, 0), (0, 1), (2, 1)}


def test_segment():
    assert make_segment().lattice_points == ((0,), (1,), (2,))


@pytest.mark.parametrize("k,d,count", [(2, 1, 3), (1, 2, 3), (2, 2, 6), (3, 2, 10), (1, 3, 4)])
def test_simplex_point_counts(k, d, count):
    P = make_simplex(k, d)
    assert P.num_points == count
    # oracle: brute-force enumeration of k*Delta_d
    brute = [m for m in product(range(k + 1), repeat=d) if sum(m) <= k]
    assert sorted(P.lattice_points) == sorted(brute)
    assert P.facets[0].distance((F(1, 5),) * d) == k - F(d, 5)


def test_products():
    sq = make_product(make_simplex(1, 1), make_simplex(1, 1))
    assert set(sq.lattice_points) == set(make_square().lattice_points)
    assert make_product(make_simplex(2, 1), make_simplex(1, 1)).num_points == 6


def test_graphical_model():
    P = make_graphical_model()
    assert P.num_points == 8 and P.num_facets == 8
    assert P.facet_normal_sum == (0,) * 5
    assert P.distance_matrix == GRAPHICAL_DESIGN
    # non-simplicial fan: five-dimensional cones with six generators at some vertex
    assert max(len(s) for s in P.incidence) == 6


def test_primitive_collections():
    assert primitive_collections(make_trapezoid(1, 1, 1)) == [frozenset({0, 2}), frozenset({1, 3})]
    assert primitive_collections(make_square()) == [frozenset({0, 2}), frozenset({1, 3})]
    pcs = primitive_collections(make_graphical_model())
    assert len(pcs) == 4 and all(len(c) == 4 for c in pcs)
    # facets numbered from 0: {n1..n4}, {n5..n8}, {n1,n3,n7,n8}, {n2,n4,n5,n6}
    assert set(pcs) == {frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7}),
                        frozenset({0, 2, 6, 7}), frozenset({1, 3, 4, 5})}


def test_simplex_primitive_collection_is_everything():
    assert primitive_collections(make_simplex(2, 2)) == [frozenset({0, 1, 2})]


def test_errors():
    with pytest.raises(Unbounded):
        LatticePolytope([((1, 0), 0), ((0, 1), 0)])
    with pytest.raises(NotFullDimensional):
        LatticePolytope([((1,), 0), ((-1,), 0)])
    with pytest.raises(RedundantFacet):
        LatticePolytope([((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1), ((-1, -1), 5)])
    with pytest.raises(PolytopeError):
        Facet((2, 0), 1)
    with pytest.raises(PolytopeError):
        make_square().__class__(make_square().facets, lattice_points=[(0, 0), (1, 0)])


coords = st.integers(0, 4)


@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=8, unique=True))
def test_lattice_points_match_brute_force(pts):
    from toricprec.search import _cross

    # convex hull by monotone chain, then rebuild from facets
    pts = sorted(pts)
    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out
    hull = half(pts)[:-1] + half(pts[::-1])[:-1]
    if len(hull) < 3:
        return
    P = polygon_from_vertices(hull)
    assert set(P.vertices) == set(hull)
    inside = {p for p in product(range(5), repeat=2)
              if all(_cross(hull[i], hull[(i + 1) % len(hull)], p) >= 0 for i in range(len(hull)))}
    assert set(P.lattice_points) == inside
    for v in P.vertices:
        assert min(f.distance(v) for f in P.facets) == 0
        assert all(f.distance(m) >= 0 for f in P.facets for m in P.lattice_points)
