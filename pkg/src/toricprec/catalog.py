"""Named fixtures: polytopes with their customary weights, known Horn
matrices and closed-form ML estimates.

The Horn constants for the trapezoid and the graphical model are read off
from the closed-form estimates below. For the trapezoid the two negative rows
enter with exponents -1/-2 and -2/-1, which fixes the signs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .polytope import (LatticePolytope, make_graphical_model, make_product, make_segment,
                       make_simplex, make_square, make_trapezoid, product_weights)
from .precision import multinomial_weights
from .statistics import HornMatrix

F = Fraction


def simplex_fixture(k: int, d: int):
    P = make_simplex(k, d)
    return P, multinomial_weights(P, k)


def simploid_fixture(factors: Sequence[tuple[int, int]]):
    """Product of simplices ``k_1 Delta_{d_1} x ... x k_r Delta_{d_r}`` with product weights."""
    if not factors:
        raise ValueError("need at least one factor")
    P, w = simplex_fixture(*factors[0])
    for k, d in factors[1:]:
        Q, wq = simplex_fixture(k, d)
        P, w = make_product(P, Q), product_weights(w, wq)
    return P, tuple(w)


def fixture(name: str, *params: int) -> tuple[LatticePolytope, tuple[Fraction, ...]]:
    """Look up a fixture by catalog name; returns ``(polytope, weights)``."""
    if name == "p1_segment":
        return make_segment(), (F(1), F(1), F(1))
    if name == "square":
        return make_square(), (F(1),) * 4
    if name == "simplex":
        k, d = params if params else (1, 2)
        return simplex_fixture(k, d)
    if name == "simploid":
        if not params or len(params) % 2:
            raise ValueError("simploid needs pairs k d")
        return simploid_fixture([(params[i], params[i + 1]) for i in range(0, len(params), 2)])
    if name == "trapezoid":
        a, b, dd = params if params else (1, 1, 1)
        P = make_trapezoid(a, b, dd)
        if (a, b, dd) == (1, 1, 1):
            return P, (F(1), F(2), F(1), F(1), F(1))
        return P, (F(1),) * P.num_points
    if name == "graphical":
        return make_graphical_model(), (F(1),) * 8
    raise KeyError(f"unknown catalog entry {name!r}")


CATALOG_NAMES = ("p1_segment", "simplex", "square", "simploid", "trapezoid", "graphical")


# Horn matrix of the square with the lattice-distance rows on top.
SQUARE_HORN = HornMatrix(
    rows=((0, 1, 0, 1), (0, 0, 1, 1), (1, 0, 1, 0), (1, 1, 0, 0), (-2, -2, -2, -2)),
    constants=(F(4), F(4), F(4), F(4)),
)

TRAPEZOID_HORN = HornMatrix(
    rows=(
        (0, 1, 2, 0, 1),
        (0, 0, 0, 1, 1),
        (2, 1, 0, 1, 0),
        (1, 1, 1, 0, 0),
        (-1, -1, -1, -1, -1),
        (-2, -2, -2, -1, -1),
    ),
    constants=(F(-1), F(-2), F(-1), F(1), F(1)),
)

GRAPHICAL_HORN = HornMatrix(
    rows=(
        (1, 1, 0, 0, 0, 0, 0, 0),
        (0, 0, 1, 1, 0, 0, 0, 0),
        (0, 0, 0, 0, 1, 1, 0, 0),
        (0, 0, 0, 0, 0, 0, 1, 1),
        (1, 0, 0, 0, 1, 0, 0, 0),
        (0, 1, 0, 0, 0, 1, 0, 0),
        (0, 0, 1, 0, 0, 0, 1, 0),
        (0, 0, 0, 1, 0, 0, 0, 1),
        (-1, -1, -1, -1, -1, -1, -1, -1),
        (-1, -1, 0, 0, -1, -1, 0, 0),
        (0, 0, -1, -1, 0, 0, -1, -1),
    ),
    constants=(F(1),) * 8,
)


def square_mle(u):
    """The four products for data normalized to sum 1."""
    u1, u2, u3, u4 = u
    return ((u1 + u3) * (u1 + u2), (u2 + u4) * (u1 + u2), (u3 + u4) * (u1 + u3), (u2 + u4) * (u3 + u4))


def trapezoid_mle(u):
    """Closed-form ML estimate of the trapezoid with weights (1, 2, 1, 1, 1)."""
    u1, u2, u3, u4, u5 = u
    tot = u1 + u2 + u3 + u4 + u5
    den = 2 * u1 + 2 * u2 + 2 * u3 + u4 + u5
    a = 2 * u1 + u2 + u4
    b = u1 + u2 + u3
    c = u2 + 2 * u3 + u5
    e = u4 + u5
    return (
        a ** 2 * b / (tot * den ** 2),
        2 * c * a * b / (tot * den ** 2),
        c ** 2 * b / (tot * den ** 2),
        e * a / (tot * den),
        c * e / (tot * den),
    )


def graphical_mle(u):
    """Closed form for the path model, written for data summing to 1."""
    u1, u2, u3, u4, u5, u6, u7, u8 = u
    lo = u1 + u2 + u5 + u6
    hi = u3 + u4 + u7 + u8
    return (
        (u1 + u2) * (u1 + u5) / lo,
        (u1 + u2) * (u2 + u6) / lo,
        (u3 + u4) * (u3 + u7) / hi,
        (u3 + u4) * (u4 + u8) / hi,
        (u1 + u5) * (u5 + u6) / lo,
        (u2 + u6) * (u5 + u6) / lo,
        (u3 + u7) * (u7 + u8) / hi,
        (u4 + u8) * (u7 + u8) / hi,
    )


def trapezoid_phi(p):
    """Inverse of tau_A composed with the monomial map, on the trapezoid."""
    s, t = p
    return (s / (2 - s - t), t * (2 - t) / ((1 - t) * (2 - s - t)))


def trapezoid_K(p):
    """K_w of the trapezoid for weights (1, 2, 1, 1, 1), in closed form."""
    s, t = p
    q = 2 - 2 * t + t * t
    return (s * (4 - 5 * t + 2 * t * t) / ((2 - t) * q), t / q)


CLOSED_FORMS: dict[str, Callable] = {
    "square": square_mle,
    "trapezoid": trapezoid_mle,
    "graphical": graphical_mle,
}
