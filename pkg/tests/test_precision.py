from fractions import Fraction as F
from math import comb

import pytest
import sympy
from hypothesis import given, strategies as st

from toricprec.catalog import fixture, simploid_fixture, trapezoid_K
from toricprec.errors import ZeroDenominator
from toricprec.polyalg import MultiPoly
from toricprec.polytope import make_graphical_model, make_simplex, make_square, make_trapezoid
from toricprec.precision import (K_w_eval, beta_poly, beta_w_poly, check_slp, lattice_distance,
                                 multinomial_weights, normalized_blending, slp_infeasibility_reason,
                                 solve_slp_weights)

unit = st.fractions(min_value=F(1, 50), max_value=F(49, 50), max_denominator=50)


def sympy_beta_w(P, w):
    """Oracle: build prod h_i^{h_i(m_j)} with sympy and expand."""
    ts = sympy.symbols(f"t1:{P.dim + 1}")
    hs = [sum(n * t for n, t in zip(f.normal, ts)) + f.offset for f in P.facets]
    expr = sum(sympy.Rational(wj.numerator, wj.denominator)
               * sympy.Mul(*[h ** f.distance(m) for h, f in zip(hs, P.facets)])
               for wj, m in zip(w, P.lattice_points))
    return sympy.Poly(sympy.expand(expr), *ts)


def as_sympy(poly, ts):
    return sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[t ** e for t, e in zip(ts, ex)])
                          for ex, c in poly.terms.items()) + 0 * ts[0], *ts)


def test_lattice_distance():
    P = make_simplex(3, 2)
    assert lattice_distance(P, 0, (F(1, 2), F(1, 3))) == 3 - F(5, 6)
    T = make_trapezoid(1, 1, 1)
    s, t = F(2, 7), F(3, 11)
    assert [lattice_distance(T, i, (s, t)) for i in range(4)] == [s, t, 2 - s - t, 1 - t]
    for v in T.vertices:
        assert min(lattice_distance(T, i, v) for i in range(4)) == 0
    with pytest.raises(IndexError):
        lattice_distance(T, 4, (0, 0))


def test_simplex_betas():
    P = make_simplex(2, 2)
    s, t = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    x0 = 2 - s - t
    for j, m in enumerate(P.lattice_points):
        assert beta_poly(P, j) == x0 ** (2 - sum(m)) * s ** m[0] * t ** m[1]


def test_square_betas():
    P = make_square()
    s, t = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    assert beta_poly(P, 0) == (1 - s) * (1 - t)
    assert [beta_poly(P, j) for j in range(1, 4)] == [s * (1 - t), (1 - s) * t, s * t]


def test_vertex_beta_positive():
    P = make_trapezoid(1, 1, 1)
    for v in P.vertices:
        j = P.lattice_points.index(tuple(int(x) for x in v))
        assert beta_poly(P, j)(v) > 0


@pytest.mark.parametrize("k,d", [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (1, 3), (3, 2)])
def test_simplex_constant(k, d):
    P = make_simplex(k, d)
    rep = check_slp(P, multinomial_weights(P, k))
    assert rep.verdict and rep.constant_c == k ** k


def test_square_and_trapezoid_beta_w():
    assert check_slp(make_square(), [1] * 4).constant_c == 1
    T, w = fixture("trapezoid", 1, 1, 1)
    t = MultiPoly.variable(1, 2)
    expected = (2 - t) * (t ** 2 - 2 * t + 2)
    assert beta_w_poly(T, w) == expected
    # independent expansion of h3^2 h4 + 2 h1 h3 h4 + h1^2 h4 + h2 h3 + h1 h2
    s_, t_ = sympy.symbols("t1 t2")
    h1, h2, h3, h4 = s_, t_, 2 - s_ - t_, 1 - t_
    oracle = sympy.expand(h3 ** 2 * h4 + 2 * h1 * h3 * h4 + h1 ** 2 * h4 + h2 * h3 + h1 * h2)
    assert sympy.expand(oracle - (2 - t_) * (t_ ** 2 - 2 * t_ + 2)) == 0


@pytest.mark.parametrize("name,params", [("square", ()), ("trapezoid", (1, 1, 1)), ("graphical", ()),
                                         ("simplex", (2, 2)), ("trapezoid", (2, 1, 1))])
def test_beta_w_against_sympy(name, params):
    P, w = fixture(name, *params)
    ts = sympy.symbols(f"t1:{P.dim + 1}")
    assert as_sympy(beta_w_poly(P, w), ts) == sympy_beta_w(P, w)


def test_verdicts():
    T, w = fixture("trapezoid", 1, 1, 1)
    rep = check_slp(T, w)
    assert not rep.verdict and rep.n_P == (0, -1)
    G, wg = fixture("graphical")
    rep = check_slp(G, wg)
    assert rep.n_P == (0,) * 5 and not rep.verdict and not rep.is_constant
    t5 = MultiPoly.variable(4, 5)
    assert rep.beta_w == 2 * t5 ** 2 - 2 * t5 + 1
    assert rep.to_dict()["beta_w_text"] == "2*t5^2 - 2*t5 + 1"


def test_solve_weights():
    w = solve_slp_weights(make_square())
    assert len(set(w)) == 1
    w = solve_slp_weights(make_simplex(2, 1))
    assert w[1] / w[0] == 2 and w[2] == w[0]
    assert solve_slp_weights(make_trapezoid(1, 1, 1)) is None
    assert slp_infeasibility_reason(make_trapezoid(1, 1, 1)) == "n_P != 0"
    assert slp_infeasibility_reason(make_square()) is None


def test_graphical_system_infeasible():
    G = make_graphical_model()
    assert solve_slp_weights(G) is None
    assert slp_infeasibility_reason(G) == "linear system infeasible"


@pytest.mark.parametrize("factors", [[(2, 1), (1, 1)], [(1, 2), (1, 1)], [(2, 1), (2, 1)]])
def test_simploids_have_slp(factors):
    P, w = simploid_fixture(factors)
    assert check_slp(P, w).verdict
    found = solve_slp_weights(P)
    assert found is not None and check_slp(P, found).verdict


def test_multinomial_weights():
    P = make_simplex(3, 1)
    assert multinomial_weights(P, 3) == tuple(F(comb(3, m[0])) for m in P.lattice_points)


@given(unit, unit)
def test_square_blending_closed_form(s, t):
    assert normalized_blending(make_square(), [1] * 4, (s, t)) == [(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t]


@given(unit, unit)
def test_blending_partition_of_unity(s, t):
    T, w = fixture("trapezoid", 1, 1, 1)
    p = (s, t * (2 - s) if t * (2 - s) < 1 else t / 2)
    assert sum(normalized_blending(T, w, p)) == 1


@given(unit, unit)
def test_K_identity_for_slp(s, t):
    p = (s * (1 - t), t)  # inside 1*Delta_2
    P = make_simplex(1, 2)
    assert K_w_eval(P, [1, 1, 1], p) == p
    assert K_w_eval(make_square(), [1] * 4, (s, t)) == (s, t)


@given(unit, unit)
def test_K_trapezoid_closed_form(s, t):
    T, w = fixture("trapezoid", 1, 1, 1)
    p = (s * (2 - t), t)
    assert K_w_eval(T, w, p) == trapezoid_K(p)


def test_blending_at_vertices_and_barycenter():
    P = make_square()
    for j, m in enumerate(P.lattice_points):
        assert normalized_blending(P, [1] * 4, m) == [int(k == j) for k in range(4)]
    assert K_w_eval(P, [1] * 4, (F(1, 2), F(1, 2))) == (F(1, 2), F(1, 2))


def test_float_evaluation_matches():
    T, w = fixture("trapezoid", 1, 1, 1)
    exact = K_w_eval(T, w, (F(1, 3), F(1, 4)))
    approx = K_w_eval(T, w, (1 / 3, 0.25))
    assert max(abs(float(a) - b) for a, b in zip(exact, approx)) < 1e-15


def test_weight_errors():
    with pytest.raises(ValueError):
        check_slp(make_square(), [1, 1, 1])
    with pytest.raises(ValueError):
        check_slp(make_square(), [1, 1, 1, 0])


def test_zero_denominator():
    # beta_w = (1 - x) + 2x vanishes at x = -1, outside the segment
    with pytest.raises(ZeroDenominator):
        normalized_blending(make_simplex(1, 1), [1, 2], (F(-1),))
