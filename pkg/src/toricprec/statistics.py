"""Log-linear model side: sufficient statistics, ML estimates and Horn matrices.

The scaled toric model of (P, w) is the closure of
``t -> (w_j t^{m_j})_j / sum_k w_k t^{m_k}``. Its ML estimate for data u is the
unique model point whose sufficient statistic ``tau_A`` matches that of u.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import (NoConvergence, NonHorn, NormalSumNonzero, NotInterior, NotSLP,
                     PoleAtInput, ZeroSum)
from .polyalg import RationalMatrix, as_fraction, format_rational, integer_primitive, kernel_basis
from .polytope import LatticePolytope, primitive_collections
from .precision import check_slp, normalized_blending, solve_slp_weights


def _is_exact(xs) -> bool:
    return all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in xs)


def _serialize(x):
    if isinstance(x, (Fraction, int)):
        return format_rational(x)
    return float(x)


def tau_A(P: LatticePolytope, x: Sequence) -> tuple:
    """``sum_j (x_j / x_+) m_j``."""
    if len(x) != P.num_points:
        raise ValueError(f"vector of length {len(x)} for {P.num_points} lattice points")
    if _is_exact(x):
        x = [Fraction(v) for v in x]
    total = sum(x)
    if total == 0:
        raise ZeroSum("coordinates sum to zero")
    return tuple(sum(xj * m[k] for xj, m in zip(x, P.lattice_points)) / total for k in range(P.dim))


def monomial_param(P: LatticePolytope, w: Sequence, t: Sequence) -> tuple:
    """Normalized weighted monomials ``w_j t^{m_j} / sum_k w_k t^{m_k}`` for positive t."""
    if len(t) != P.dim:
        raise ValueError(f"point has {len(t)} coordinates, polytope dimension is {P.dim}")
    if any(ti <= 0 for ti in t):
        raise ValueError("t must be strictly positive")
    if _is_exact(t) and _is_exact(w):
        t, w = [Fraction(v) for v in t], [Fraction(v) for v in w]
    vals = [wj * math.prod((ti ** mi for ti, mi in zip(t, m)), start=1)
            for wj, m in zip(w, P.lattice_points)]
    total = sum(vals)
    return tuple(v / total for v in vals)


@dataclass
class MLEResult:
    estimate: tuple
    sufficient_statistic: tuple
    residual: float | Fraction
    method: str
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "estimate": [_serialize(x) for x in self.estimate],
            "sufficient_statistic": [_serialize(x) for x in self.sufficient_statistic],
            "residual": _serialize(self.residual),
            "iterations": self.iterations,
        }


def _max_abs_diff(a, b):
    return max((abs(x - y) for x, y in zip(a, b)), default=0)


def mle_closed_form(P: LatticePolytope, w: Sequence, u: Sequence, report=None) -> MLEResult:
    """ML estimate as blending functions evaluated at the sufficient statistic.

    Only valid when (P, w) has strict linear precision; ``report`` may carry a
    precomputed :class:`SLPReport` to skip re-expanding ``beta_w``.
    """
    report = report or check_slp(P, w)
    if not report.verdict:
        raise NotSLP("closed-form ML estimate needs strict linear precision")
    # zero counts are fine here: the blending functions extend to the boundary
    if any(x < 0 for x in u) or not any(u):
        raise ValueError("data must be non-negative and not all zero")
    p = tau_A(P, u)
    est = tuple(normalized_blending(P, w, p))
    return MLEResult(est, p, _max_abs_diff(tau_A(P, est), p), "closed_form")


def _log_likelihood(theta, A, logw, p):
    z = logw + A @ theta
    zmax = z.max()
    return float(p @ theta - (zmax + math.log(np.exp(z - zmax).sum())))


def _model_point(theta, A, logw):
    z = logw + A @ theta
    z = z - z.max()
    x = np.exp(z)
    return x / x.sum()


def mle_newton(P: LatticePolytope, w: Sequence, u: Sequence, tol: float = 1e-12,
               max_iter: int = 200) -> MLEResult:
    """ML estimate by damped Newton on the log-likelihood in log-torus coordinates.

    Starts from theta = 0; the gradient is ``p - tau_A(model)`` and the Hessian
    is minus the covariance of the lattice points under the model.
    """
    if any(x <= 0 for x in u):
        raise ValueError("data must be strictly positive")
    p_exact = tau_A(P, u)
    if not P.is_interior(p_exact):
        raise NotInterior("sufficient statistic is not interior to P")
    A = np.array(P.lattice_points, dtype=float)
    logw = np.log(np.array([float(x) for x in w]))
    p = np.array([float(x) for x in p_exact])
    theta = np.zeros(P.dim)
    x = _model_point(theta, A, logw)
    grad = p - x @ A
    ll = _log_likelihood(theta, A, logw, p)
    it = 0
    while np.abs(grad).max() > tol:
        if it >= max_iter:
            raise NoConvergence(it, float(np.abs(grad).max()))
        it += 1
        mean = x @ A
        centered = A - mean
        cov = centered.T @ (centered * x[:, None])
        step = np.linalg.solve(cov, grad)
        t = 1.0
        while True:
            cand = theta + t * step
            ll_new = _log_likelihood(cand, A, logw, p)
            x_new = _model_point(cand, A, logw)
            g_new = p - x_new @ A
            # near the optimum the likelihood is flat to rounding, so also accept
            # any step that shrinks the gradient
            if ll_new >= ll or np.abs(g_new).max() < np.abs(grad).max() or t < 1e-12:
                break
            t *= 0.5
        theta, x, grad, ll = cand, x_new, g_new, ll_new
    est = tuple(float(v) for v in x)
    return MLEResult(est, tuple(float(v) for v in p), float(np.abs(grad).max()), "newton", it)


def mle(P: LatticePolytope, w: Sequence, u: Sequence, tol: float = 1e-12) -> MLEResult:
    """Closed form when (P, w) has strict linear precision, Newton otherwise."""
    report = check_slp(P, w)
    if report.verdict and _is_exact(u) and _is_exact(w):
        return mle_closed_form(P, w, u, report=report)
    return mle_newton(P, w, u, tol=tol)


def model_binomials(P: LatticePolytope) -> list[tuple[int, ...]]:
    """Integer basis of ``{v : sum v_j = 0, sum v_j m_j = 0}``."""
    rows = [[1] * P.num_points] + [[m[k] for m in P.lattice_points] for k in range(P.dim)]
    return [integer_primitive(v) for v in kernel_basis(RationalMatrix(rows))]


def model_membership_residual(P: LatticePolytope, w: Sequence, x: Sequence):
    """Largest deviation of ``prod_j (x_j / w_j)^{v_j}`` from 1 over the binomial basis."""
    worst = 0
    exact = _is_exact(x) and _is_exact(w)
    for v in model_binomials(P):
        if exact:
            val = math.prod((Fraction(xj) / Fraction(wj)) ** vj for xj, wj, vj in zip(x, w, v))
            worst = max(worst, abs(val - 1))
        else:
            s = sum(vj * (math.log(float(xj)) - math.log(float(wj))) for xj, wj, vj in zip(x, w, v))
            worst = max(worst, abs(math.expm1(s)))
    return worst


# ---------------------------------------------------------------------------
# Horn matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HornMatrix:
    """Integer matrix with zero column sums plus one nonzero constant per column.

    Zero rows contribute ``0 ** 0 = 1`` to every component and are dropped.
    """
    rows: tuple[tuple[int, ...], ...]
    constants: tuple[Fraction, ...]

    def __post_init__(self):
        consts = tuple(as_fraction(c) for c in self.constants)
        s = len(consts)
        rows = tuple(tuple(int(b) for b in r) for r in self.rows)
        if any(len(r) != s for r in rows):
            raise ValueError("every row needs one entry per constant")
        if any(c == 0 for c in consts):
            raise ValueError("Horn constants must be nonzero")
        if any(sum(r[j] for r in rows) != 0 for j in range(s)):
            raise NonHorn("column sums are not all zero")
        object.__setattr__(self, "rows", tuple(r for r in rows if any(r)))
        object.__setattr__(self, "constants", consts)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.constants)

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows],
                "constants": [format_rational(c) for c in self.constants]}

    @classmethod
    def from_dict(cls, doc: dict) -> "HornMatrix":
        return cls(tuple(tuple(r) for r in doc["rows"]), tuple(as_fraction(c) for c in doc["constants"]))


def horn_matrix_slp(P: LatticePolytope, w: Sequence | None = None) -> HornMatrix:
    """Lattice-distance rows plus a last row of ``-a_P``; constants ``(w_j/c)(-a_P)^{a_P}``.

    Without explicit weights the strict-linear-precision weights are solved for.
    """
    if any(P.facet_normal_sum):
        raise NormalSumNonzero(f"facet normals sum to {P.facet_normal_sum}")
    if w is None:
        w = solve_slp_weights(P)
        if w is None:
            raise NotSLP("no weights give strict linear precision")
    w = tuple(as_fraction(x) for x in w)
    report = check_slp(P, w)
    if not report.verdict:
        raise NotSLP("beta_w is not constant for these weights")
    c = report.constant_c
    a_P = P.offset_sum
    rows = [list(r) for r in P.distance_matrix] + [[-a_P] * P.num_points]
    scale = Fraction(-a_P) ** a_P
    return HornMatrix(tuple(tuple(r) for r in rows), tuple(wj / c * scale for wj in w))


def horn_eval(H: HornMatrix, u: Sequence) -> tuple:
    """``d_j * prod_k l_k(u) ** b_kj`` with ``l_k(u) = sum_j b_kj u_j``."""
    s = len(H.constants)
    if len(u) != s:
        raise ValueError(f"vector of length {len(u)} for a Horn matrix with {s} columns")
    exact = _is_exact(u)
    forms = [sum(b * x for b, x in zip(r, u)) for r in H.rows]
    out = []
    for j in range(s):
        val = H.constants[j] if exact else float(H.constants[j])
        for k, r in enumerate(H.rows):
            b = r[j]
            if b == 0:
                continue
            if forms[k] == 0:
                if b < 0:
                    raise PoleAtInput(k)
                val = val * 0
                continue
            val = val * forms[k] ** b
        out.append(val)
    return tuple(out)


def _line_key(row: Sequence[int]) -> tuple[int, ...]:
    """Primitive generator of the line through ``row``, sign fixed by its first nonzero entry."""
    g = math.gcd(*row)
    prim = [x // g for x in row]
    first = next(x for x in prim if x)
    return tuple(prim) if first > 0 else tuple(-x for x in prim)


def minimal_horn(H: HornMatrix) -> HornMatrix:
    """Merge rows lying on a common line through the origin.

    Rows ``c_i * g`` (g primitive) merge into ``C * g`` with ``C = sum c_i``;
    since ``l_i = c_i * l_g``, constant j picks up ``prod_i c_i^(c_i g_j) / C^(C g_j)``
    (just the numerator when C = 0 and the row disappears), which keeps the
    parametrization identical. Exponents are integers, so every factor is
    rational.
    """
    groups: dict[tuple[int, ...], list[int]] = {}
    for r in H.rows:
        g = _line_key(r)
        c = next(a // b for a, b in zip(r, g) if b)
        groups.setdefault(g, []).append(c)
    consts = list(H.constants)
    rows = []
    for g, cs in groups.items():
        C = sum(cs)
        for j, gj in enumerate(g):
            if gj == 0:
                continue
            factor = Fraction(1)
            for c in cs:
                factor *= Fraction(c) ** (c * gj)
            if C:
                factor /= Fraction(C) ** (C * gj)
            consts[j] *= factor
        if C:
            rows.append(tuple(C * x for x in g))
    return HornMatrix(tuple(rows), tuple(consts))


def is_minimal_horn(H: HornMatrix) -> bool:
    keys = [_line_key(r) for r in H.rows]
    return len(keys) == len(set(keys))


def random_rational_data(rng: random.Random, s: int) -> tuple[Fraction, ...]:
    """Numerators uniform in [1, 100] over the prime denominator 101."""
    return tuple(Fraction(rng.randint(1, 100), 101) for _ in range(s))


@dataclass
class HornVerification:
    passed: bool
    method: str
    trials: int
    tol: float
    residuals: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((float(r) for r in self.residuals), default=0.0)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "method": self.method, "trials": self.trials,
                "tol": self.tol, "max_residual": self.max_residual,
                "residuals": [float(r) for r in self.residuals], "failures": self.failures}


def verify_horn(H: HornMatrix, P: LatticePolytope, w: Sequence, trials: int = 50,
                tol: float = 1e-9, seed: int = 0) -> HornVerification:
    """Compare the Horn parametrization with an independent ML estimate at random data.

    Exact equality against the closed form under strict linear precision,
    agreement within ``tol`` against Newton otherwise.
    """
    rng = random.Random(seed)
    report = check_slp(P, w)
    method = "closed_form" if report.verdict else "newton"
    residuals, failures = [], []
    for t in range(trials):
        u = random_rational_data(rng, P.num_points)
        try:
            h = horn_eval(H, u)
            if report.verdict:
                ref = mle_closed_form(P, w, u, report=report).estimate
                res = _max_abs_diff(h, ref)
                ok = res == 0
            else:
                ref = mle_newton(P, w, u).estimate
                res = float(_max_abs_diff([float(x) for x in h], ref))
                ok = res <= tol
        except (PoleAtInput, NoConvergence) as exc:
            failures.append({"trial": t, "error": str(exc)})
            continue
        residuals.append(res)
        if not ok:
            failures.append({"trial": t, "residual": float(res)})
    return HornVerification(not failures, method, trials, tol, residuals, failures)


def horn_structure_report(H: HornMatrix, P: LatticePolytope) -> list[dict]:
    """Describe each Horn row against the distance matrix and primitive collections.

    A negative row is matched against ``-(sum of distance rows over S)`` for S a
    primitive collection or a subset of one. Descriptive only.
    """
    D = P.distance_matrix
    pcs = primitive_collections(P)
    subsets = sorted({frozenset(c) for pc in pcs for k in range(1, len(pc) + 1)
                      for c in combinations(sorted(pc), k)}, key=lambda S: (len(S), sorted(S)))
    out = []
    for k, r in enumerate(H.rows):
        entry = {"row": k, "entries": list(r), "distance_facet": None,
                 "primitive_collections": [], "collection_subsets": []}
        for i, drow in enumerate(D):
            if tuple(drow) == tuple(r):
                entry["distance_facet"] = i
        if entry["distance_facet"] is None and all(x <= 0 for x in r):
            for S in subsets:
                neg = tuple(-sum(D[i][j] for i in S) for j in range(P.num_points))
                if neg == tuple(r):
                    key = "primitive_collections" if S in pcs else "collection_subsets"
                    entry[key].append(sorted(S))
        out.append(entry)
    return out
