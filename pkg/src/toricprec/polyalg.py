"""Exact rational arithmetic helpers, multivariate polynomials and linear algebra.

Scalars are :class:`fractions.Fraction` throughout; they are always reduced
with a positive denominator, which is exactly the canonical form we need.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from numbers import Rational
from typing import Iterable, Mapping, Sequence


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: silently turning 0.1 into 3602879701896397/36028797018963968
    is never what a caller of the exact routines wants.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {x!r} as an exact rational")


def format_rational(x) -> str:
    """Serialize as ``"p/q"`` or ``"p"`` when the denominator is one."""
    return str(as_fraction(x))


def parse_rational(s) -> Fraction:
    return as_fraction(s)


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _grlex_key(exps: tuple[int, ...]):
    # larger total degree first, ties broken lexicographically (x0 > x1 > ...)
    return (-sum(exps), tuple(-e for e in exps))


class MultiPoly:
    """Polynomial in ``num_vars`` variables with exact rational coefficients.

    Terms are stored as a mapping from dense exponent tuples to nonzero
    Fractions. Instances are immutable and hashable.
    """

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise DimensionMismatch(f"exponent {exps} has length {len(exps)}, expected {num_vars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.num_vars = num_vars
        self._terms = clean
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, num_vars: int) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, i: int, num_vars: int) -> "MultiPoly":
        if not 0 <= i < num_vars:
            raise IndexError(f"variable index {i} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[i] = 1
        return cls(num_vars, {tuple(exps): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "MultiPoly":
        """The affine form ``sum(coeffs[i] * x_i) + const``."""
        d = len(coeffs)
        terms = {(0,) * d: const}
        for i, c in enumerate(coeffs):
            e = [0] * d
            e[i] = 1
            terms[tuple(e)] = c
        return cls(d, terms)

    # access -------------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.num_vars)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def nonconstant_monomials(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.sorted_terms() if any(e)]

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.num_vars != self.num_vars:
                raise DimensionMismatch(
                    f"polynomials in {self.num_vars} and {other.num_vars} variables")
            return other
        return MultiPoly.constant(as_fraction(other), self.num_vars)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiPoly(self.num_vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.num_vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = MultiPoly.constant(1, self.num_vars)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.num_vars == other.num_vars and self._terms == other._terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    def __call__(self, x):
        return poly_eval(self, x)

    def __repr__(self):
        return f"MultiPoly({self.num_vars}, {self.pretty()!r})"

    def pretty(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.num_vars)]
        out = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")

    # serialization ------------------------------------------------------
    def to_records(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": format_rational(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_records(cls, num_vars: int, records: Iterable[Mapping]) -> "MultiPoly":
        return cls(num_vars, {tuple(r["exponents"]): parse_rational(r["coeff"]) for r in records})


def poly_eval(p: MultiPoly, x: Sequence):
    """Evaluate ``p`` at ``x``.

    Works for any numeric kind that supports ``+``, ``*`` and integer powers;
    Fraction input gives the exact value.
    """
    if len(x) != p.num_vars:
        raise DimensionMismatch(f"point has {len(x)} coordinates, polynomial has {p.num_vars} variables")
    total = 0
    for exps, c in p._terms.items():
        term = c
        for xi, e in zip(x, exps):
            if e:
                term = term * xi ** e
        total = total + term
    if isinstance(total, int):
        return Fraction(total)
    return total


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class RationalMatrix:
    """Rectangular matrix of Fractions, stored row-major and never mutated."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(as_fraction(v) for v in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("an empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    def __repr__(self):
        return f"RationalMatrix({[[str(v) for v in r] for r in self.rows]})"

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.ncols == other.ncols and self.rows == other.rows

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.rows), ncols=self.nrows) if self.rows else RationalMatrix([], ncols=0)

    def matvec(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} against {self.ncols} columns")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.rows)

    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form and the pivot columns."""
        m = [list(r) for r in self.rows]
        pivots: list[int] = []
        row = 0
        for col in range(self.ncols):
            piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = 1 / m[row][col]
            m[row] = [v * inv for v in m[row]]
            for i in range(len(m)):
                if i != row and m[i][col] != 0:
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[row])]
            pivots.append(col)
            row += 1
            if row == len(m):
                break
        return m[:row], pivots

    def rank(self) -> int:
        return len(self.rref()[1])


def kernel_basis(M: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right kernel, one vector per free column."""
    return _kernel_from_rref(*M.rref(), M.ncols)


def _kernel_from_rref(reduced, pivots, ncols) -> list[tuple[Fraction, ...]]:
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(reduced, pivots):
            v[pc] = -r[f]
        basis.append(tuple(v))
    return basis


def solve_square(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of the square system ``A x = b``, or None when singular."""
    n = len(A)
    aug = RationalMatrix([list(r) + [bi] for r, bi in zip(A, b)], ncols=n + 1)
    reduced, pivots = aug.rref()
    if pivots != list(range(n)):
        return None
    return tuple(r[n] for r in reduced)


def integer_primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, as_fraction(x).denominator)
    ints = [int(as_fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


# ---------------------------------------------------------------------------
# phase-1 simplex
# ---------------------------------------------------------------------------

def _phase_one(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Find y >= 0 with A y = b (b >= 0 assumed) or return None.

    Tableau simplex on the auxiliary problem min sum(artificials) with Bland's
    rule, so it terminates without cycling; all arithmetic is exact.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    # columns 0..n-1 original, n..n+m-1 artificial, last entry is the rhs
    tab = [list(A[i]) + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # reduced costs of the auxiliary objective
    cost = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n):
            cost[j] -= tab[i][j]
        cost[-1] -= tab[i][-1]
    while True:
        entering = next((j for j in range(n + m) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            # the auxiliary objective is bounded below by zero, so this cannot happen
            raise ArithmeticError("unbounded auxiliary problem")
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [a - f * c for a, c in zip(tab[i], tab[r])]
        if cost[entering] != 0:
            f = cost[entering]
            cost = [a - f * c for a, c in zip(cost, tab[r])]
        basis[r] = entering
    if cost[-1] != 0:
        return None
    y = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            y[bv] = tab[i][-1]
    return y


def positive_kernel_point(M: RationalMatrix) -> tuple[Fraction, ...] | None:
    """A vector v with ``M v = 0`` and every coordinate >= 1, if one exists.

    Substituting v = 1 + y turns this into the standard-form feasibility
    problem ``M y = -M 1, y >= 0``.
    """
    n = M.ncols
    if n == 0:
        return ()
    reduced, pivots = M.rref()
    basis = _kernel_from_rref(reduced, pivots, n)
    if not basis:
        return None
    if not pivots:
        return (Fraction(1),) * n
    if len(basis) == 1:
        # a line: feasible iff the generator has all entries of one strict sign
        v = basis[0]
        if all(x > 0 for x in v) or all(x < 0 for x in v):
            scale = 1 / min(v, key=abs)
            return tuple(x * scale for x in v)
        return None
    # independent rows only, so the auxiliary problem has no redundant artificials
    R = RationalMatrix(reduced, ncols=n)
    ones = (Fraction(1),) * n
    rhs = [-x for x in R.matvec(ones)]
    A = [list(r) for r in R.rows]
    for i, bi in enumerate(rhs):
        if bi < 0:
            A[i] = [-a for a in A[i]]
            rhs[i] = -bi
    y = _phase_one(A, rhs)
    if y is None:
        return None
    v = tuple(1 + yi for yi in y)
    assert all(x == 0 for x in M.matvec(v))
    return v


def dot(u: Sequence, v: Sequence):
    total = 0
    for a, b in zip_longest(u, v):
        if a is None or b is None:
            raise DimensionMismatch("vectors of different length")
        total = total + a * b
    return total
