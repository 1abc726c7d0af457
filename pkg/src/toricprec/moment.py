"""Weighted Fubini-Study and quotient moment maps on the positive torus.

Points of the torus enter through their norm-squared coordinates
``q = (|x_1|^2, ..., |x_d|^2)``. Everything here is binary64: inverting
K_w is genuinely algebraic, so there is no exact route in general.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NoConvergence, NotInterior
from .polytope import LatticePolytope
from .precision import check_slp

NEWTON_TOL = 1e-12
EQUALITY_TOL = 1e-9


def _check_q(P: LatticePolytope, q) -> np.ndarray:
    q = np.asarray([float(x) for x in q])
    if q.shape != (P.dim,):
        raise ValueError(f"need {P.dim} norm-squared coordinates, got {q.shape[0]}")
    if np.any(q <= 0):
        raise ValueError("norm-squared coordinates must be strictly positive")
    return q


def mu_FS(P: LatticePolytope, w: Sequence, q: Sequence) -> np.ndarray:
    """``tau_A`` of the weighted monomials ``w_j q^{m_j}``, computed in log space."""
    q = _check_q(P, q)
    A = np.array(P.lattice_points, dtype=float)
    z = np.log([float(x) for x in w]) + A @ np.log(q)
    x = np.exp(z - z.max())
    return (x / x.sum()) @ A


def quotient_weights(P: LatticePolytope, w: Sequence | None = None) -> tuple[Fraction, ...]:
    """``2^{<m_j, n_P>} w_j``; equal to w whenever the facet normals sum to zero."""
    if w is None:
        w = (Fraction(1),) * P.num_points
    n_P = P.facet_normal_sum
    return tuple(Fraction(2) ** sum(a * b for a, b in zip(m, n_P)) * Fraction(wj)
                 for m, wj in zip(P.lattice_points, w))


def _distances(P: LatticePolytope, p: np.ndarray) -> np.ndarray:
    N = np.array([f.normal for f in P.facets], dtype=float)
    a = np.array([f.offset for f in P.facets], dtype=float)
    return N @ p + a


def _K_float(P: LatticePolytope, logw: np.ndarray, A: np.ndarray, D: np.ndarray, p: np.ndarray) -> np.ndarray:
    h = _distances(P, p)
    # log beta_j = sum_i D_ij log h_i, valid in the interior where every h_i > 0
    z = logw + D.T @ np.log(h)
    x = np.exp(z - z.max())
    return (x / x.sum()) @ A


def K_inverse(P: LatticePolytope, w: Sequence, y: Sequence, tol: float = NEWTON_TOL,
              max_iter: int = 200) -> np.ndarray:
    """Solve ``K_w(p) = y`` for interior p by damped Newton.

    The Jacobian is a central finite difference; steps are halved until the
    iterate stays interior and the residual drops.
    """
    y = np.asarray([float(v) for v in y])
    A = np.array(P.lattice_points, dtype=float)
    D = np.array(P.distance_matrix, dtype=float)
    logw = np.log([float(x) for x in w])

    def K(p):
        return _K_float(P, logw, A, D, p)

    p = np.array([float(c) for c in P.centroid()])
    r = K(p) - y
    res = float(np.abs(r).max())
    it = 0
    while res > tol:
        if it >= max_iter:
            raise NoConvergence(it, res)
        it += 1
        hmin = float(_distances(P, p).min())
        eps = min(1e-6, 0.25 * hmin)
        J = np.empty((P.dim, P.dim))
        for k in range(P.dim):
            e = np.zeros(P.dim)
            e[k] = eps
            J[:, k] = (K(p + e) - K(p - e)) / (2 * eps)
        step = np.linalg.solve(J, -r)
        t = 1.0
        while True:
            cand = p + t * step
            if _distances(P, cand).min() > 0:
                r_new = K(cand) - y
                res_new = float(np.abs(r_new).max())
                if res_new < res:
                    break
            t *= 0.5
            if t < 1e-14:
                raise NoConvergence(it, res)
        p, r, res = cand, r_new, res_new
    return p


def mu_quot(P: LatticePolytope, q: Sequence, tol: float = NEWTON_TOL) -> np.ndarray:
    """Quotient moment map, obtained by inverting ``K_W`` against ``mu_FS`` with unit weights.

    ``W_j = 2^{<m_j, n_P>}``; the map does not depend on any weight choice.
    """
    y = mu_FS(P, [1] * P.num_points, q)
    return K_inverse(P, quotient_weights(P), y, tol=tol)


def lattice_distance_lift(P: LatticePolytope, p: Sequence) -> tuple:
    """Moduli ``|z_i|^2 = 2 h_i(p)`` of a reduction representative over interior p."""
    h = [f.distance(p) for f in P.facets]
    if any(x <= 0 for x in h):
        raise NotInterior(f"{tuple(p)} is not an interior point")
    return tuple(2 * x for x in h)


@dataclass
class MomentComparison:
    sample_points: list
    max_gap: float
    slp_verdict: bool
    tol: float = EQUALITY_TOL
    gaps: list = field(default_factory=list)

    @property
    def maps_equal(self) -> bool:
        return self.max_gap <= self.tol

    def to_dict(self) -> dict:
        return {"samples": len(self.sample_points), "max_gap": self.max_gap,
                "slp_verdict": self.slp_verdict, "tol": self.tol, "maps_equal": self.maps_equal}


def sample_torus(d: int, samples: int, seed: int = 0, lo: float = 1 / 8, hi: float = 8.0) -> np.ndarray:
    """Log-uniform positive points in ``[lo, hi]^d``."""
    rng = np.random.default_rng(seed)
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=(samples, d)))


def compare_moment_maps(P: LatticePolytope, w: Sequence, samples: int = 100,
                        tol: float = EQUALITY_TOL, seed: int = 0) -> MomentComparison:
    """Sup-norm gap between ``mu_quot`` and ``mu_FS`` with weights w over sampled q.

    ``gaps`` keeps one record per sample (q, both maps, gap) for CSV export.
    """
    points, records = [], []
    for q in sample_torus(P.dim, samples, seed):
        fs = mu_FS(P, w, q)
        quot = mu_quot(P, q)
        points.append(tuple(float(x) for x in q))
        records.append({"q": points[-1], "fs": tuple(float(x) for x in fs),
                        "quot": tuple(float(x) for x in quot), "gap": float(np.abs(fs - quot).max())})
    max_gap = max((r["gap"] for r in records), default=0.0)
    return MomentComparison(points, max_gap, check_slp(P, w).verdict, tol, gaps=records)
