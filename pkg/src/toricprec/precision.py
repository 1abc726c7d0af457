"""Toric blending functions, the map K_w and strict linear precision.

A pair (P, w) has strict linear precision when the weighted blending
functions reproduce the identity on P. This holds exactly when the facet
normals sum to zero and ``beta_w`` is a nonzero constant, which is decided
here by full symbolic expansion.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from .errors import ZeroDenominator
from .polyalg import MultiPoly, RationalMatrix, as_fraction, format_rational, positive_kernel_point
from .polytope import LatticePolytope


def lattice_distance(P: LatticePolytope, i: int, p: Sequence):
    if not 0 <= i < P.num_facets:
        raise IndexError(f"facet index {i} out of range (polytope has {P.num_facets} facets)")
    return P.facets[i].distance(p)


def _distance_polys(P: LatticePolytope) -> list[MultiPoly]:
    return [MultiPoly.linear(f.normal, f.offset) for f in P.facets]


def beta_polys(P: LatticePolytope) -> tuple[MultiPoly, ...]:
    """All expanded ``beta_j``, cached per polytope instance."""
    hit = P.__dict__.get("_beta_polys")
    if hit is not None:
        return hit
    hs = _distance_polys(P)
    # powers are shared between lattice points, so build each h_i^e once
    powers: dict[tuple[int, int], MultiPoly] = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = power(i, e - 1) * hs[i] if e else MultiPoly.constant(1, P.dim)
        return powers[(i, e)]

    betas = []
    for j in range(P.num_points):
        b = MultiPoly.constant(1, P.dim)
        for i in range(P.num_facets):
            e = P.distance_matrix[i][j]
            if e:
                b = b * power(i, e)
        betas.append(b)
    betas = tuple(betas)
    P.__dict__["_beta_polys"] = betas
    return betas


def beta_poly(P: LatticePolytope, j: int) -> MultiPoly:
    """Expanded ``prod_i h_i(t) ** h_i(m_j)``."""
    return beta_polys(P)[j]


def _check_weights(P: LatticePolytope, w: Sequence) -> tuple:
    if len(w) != P.num_points:
        raise ValueError(f"{len(w)} weights for {P.num_points} lattice points")
    if any(x <= 0 for x in w):
        raise ValueError("weights must be strictly positive")
    return tuple(w)


def beta_w_poly(P: LatticePolytope, w: Sequence) -> MultiPoly:
    w = tuple(as_fraction(x) for x in _check_weights(P, w))
    total = MultiPoly(P.dim)
    for wj, bj in zip(w, beta_polys(P)):
        total = total + bj * wj
    return total


def beta_values(P: LatticePolytope, p: Sequence) -> list:
    """``beta_j(p)`` for every j, evaluated through the product form.

    Works for Fractions and floats alike. A zero distance raised to a zero
    exponent contributes 1, and Python's ``0 ** 0 == 1`` already does that.
    """
    hs = [f.distance(p) for f in P.facets]
    D = P.distance_matrix
    return [prod((hs[i] ** D[i][j] for i in range(P.num_facets)), start=1) for j in range(P.num_points)]


def normalized_blending(P: LatticePolytope, w: Sequence, p: Sequence) -> list:
    """The toric blending functions ``w_j beta_j(p) / beta_w(p)`` at p."""
    w = _check_weights(P, w)
    terms = [wj * bj for wj, bj in zip(w, beta_values(P, p))]
    total = sum(terms)
    if total == 0:
        raise ZeroDenominator(f"beta_w vanishes at {tuple(p)}")
    return [t / total for t in terms]


def K_w_eval(P: LatticePolytope, w: Sequence, p: Sequence) -> tuple:
    """The map ``K_w(p) = sum_j blend_j(p) m_j``; exact for rational p."""
    blend = normalized_blending(P, w, p)
    return tuple(sum(b * m[k] for b, m in zip(blend, P.lattice_points)) for k in range(P.dim))


@dataclass(frozen=True)
class SLPReport:
    n_P: tuple[int, ...]
    beta_w: MultiPoly
    is_constant: bool
    constant_c: Fraction | None
    verdict: bool

    def to_dict(self) -> dict:
        return {
            "n_P": list(self.n_P),
            "beta_w": self.beta_w.to_records(),
            "beta_w_text": self.beta_w.pretty([f"t{i + 1}" for i in range(self.beta_w.num_vars)]),
            "is_constant": self.is_constant,
            "c": None if self.constant_c is None else format_rational(self.constant_c),
            "verdict": self.verdict,
        }


def check_slp(P: LatticePolytope, w: Sequence) -> SLPReport:
    bw = beta_w_poly(P, w)
    const = bw.is_constant() and not bw.is_zero()
    c = bw.constant_term() if const else None
    n_P = P.facet_normal_sum
    return SLPReport(n_P=n_P, beta_w=bw, is_constant=const, constant_c=c,
                     verdict=const and not any(n_P))


def slp_linear_system(P: LatticePolytope) -> tuple[list[tuple[int, ...]], RationalMatrix]:
    """Rows: coefficient of each non-constant monomial in each ``beta_j``."""
    betas = beta_polys(P)
    monos = sorted({e for b in betas for e in b.nonconstant_monomials()})
    rows = [[b.coeff(e) for b in betas] for e in monos]
    return monos, RationalMatrix(rows, ncols=P.num_points)


def solve_slp_weights(P: LatticePolytope) -> tuple[Fraction, ...] | None:
    """Positive weights giving strict linear precision, or None if there are none.

    The search is complete: None with ``n_P = 0`` means the exact system
    ``{M w = 0, w >= 1}`` is infeasible.
    """
    if any(P.facet_normal_sum):
        return None
    _, M = slp_linear_system(P)
    if M.nrows == 0:
        return (Fraction(1),) * P.num_points
    return positive_kernel_point(M)


def slp_infeasibility_reason(P: LatticePolytope) -> str | None:
    if any(P.facet_normal_sum):
        return "n_P != 0"
    if solve_slp_weights(P) is None:
        return "linear system infeasible"
    return None


def multinomial_weights(P: LatticePolytope, k: int) -> tuple[Fraction, ...]:
    """``k! / ((k - |m|)! m_1! ... m_d!)`` for each lattice point m of k*Delta_d."""
    out = []
    for m in P.lattice_points:
        rest = k - sum(m)
        if rest < 0 or any(x < 0 for x in m):
            raise ValueError(f"{m} is not a lattice point of the {k}-simplex")
        out.append(Fraction(factorial(k), factorial(rest) * prod(factorial(x) for x in m)))
    return tuple(out)
