"""Exact linear algebra over the fraction field of the scalar ring.

Small helper used to solve for a target-basis contraction matrix given the
source-basis one: fractions of polynomials with no normalization (systems
here have a handful of unknowns), Gaussian elimination, and exact
multivariate division to land back in the polynomial ring.
"""

from __future__ import annotations

from .scalars import GaussianRational, ScalarPoly

__all__ = ["PolyFraction", "solve_linear_system", "exact_divide"]


class PolyFraction:
    """Quotient of two scalar polynomials; denominators never normalized."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = ScalarPoly.coerce(num)
        self.den = ScalarPoly.one() if den is None else ScalarPoly.coerce(den)
        if self.den.is_zero:
            raise ZeroDivisionError("zero denominator")

    @property
    def is_zero(self):
        return self.num.is_zero

    def __add__(self, other):
        other = _coerce(other)
        return PolyFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        other = _coerce(other)
        return PolyFraction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __mul__(self, other):
        other = _coerce(other)
        return PolyFraction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by zero fraction")
        return PolyFraction(self.num * other.den, self.den * other.num)

    def __neg__(self):
        return PolyFraction(-self.num, self.den)

    def to_poly(self) -> ScalarPoly:
        """Exact polynomial value; raises ValueError if the division fails."""
        return exact_divide(self.num, self.den)

    def __repr__(self):
        return f"PolyFraction({self.num} / {self.den})"


def _coerce(value):
    if isinstance(value, PolyFraction):
        return value
    return PolyFraction(value)


def _exponent_vector(mono, names):
    exps = dict(mono)
    return tuple(exps.get(n, 0) for n in names)


def _leading(poly: ScalarPoly, names):
    best = None
    best_mono = None
    for mono in poly.terms:
        vec = _exponent_vector(mono, names)
        if best is None or vec > best:
            best = vec
            best_mono = mono
    return best, best_mono


def exact_divide(num: ScalarPoly, den: ScalarPoly) -> ScalarPoly:
    """Quotient num/den in the polynomial ring; ValueError when inexact."""
    if num.is_zero:
        return ScalarPoly.zero()
    if den.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    names = sorted(num.free_symbols() | den.free_symbols())
    quotient = ScalarPoly.zero()
    remainder = num
    den_vec, den_mono = _leading(den, names)
    den_coeff = den.terms[den_mono]
    guard = 0
    while not remainder.is_zero:
        guard += 1
        if guard > 10000:
            raise ValueError("division did not terminate")
        rem_vec, rem_mono = _leading(remainder, names)
        diff = tuple(r - d for r, d in zip(rem_vec, den_vec))
        if any(e < 0 for e in diff):
            raise ValueError(f"{den} does not divide {num} exactly")
        term_mono = tuple(
            (n, e) for n, e in zip(names, diff) if e != 0
        )
        coeff = remainder.terms[rem_mono] / den_coeff
        term = ScalarPoly({term_mono: coeff})
        quotient = quotient + term
        remainder = remainder - term * den
    return quotient


def solve_linear_system(rows, rhs):
    """Solve ``rows @ x = rhs`` over polynomial fractions.

    Returns a particular solution with free unknowns set to zero, or raises
    ValueError when the system is inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    a = [[_coerce(v) for v in row] for row in rows]
    b = [_coerce(v) for v in rhs]
    pivot_cols = []
    r = 0
    for col in range(n):
        pivot = None
        for i in range(r, m):
            if not a[i][col].is_zero:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        b[r], b[pivot] = b[pivot], b[r]
        inv = a[r][col]
        for j in range(col, n):
            a[r][j] = a[r][j] / inv
        b[r] = b[r] / inv
        for i in range(m):
            if i != r and not a[i][col].is_zero:
                factor = a[i][col]
                for j in range(col, n):
                    a[i][j] = a[i][j] - factor * a[r][j]
                b[i] = b[i] - factor * b[r]
        pivot_cols.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not b[i].is_zero and _is_fraction_zero_row(a[i]):
            raise ValueError("inconsistent linear system")
    x = [PolyFraction(0) for _ in range(n)]
    for row_idx, col in enumerate(pivot_cols):
        value = b[row_idx]
        for j in range(col + 1, n):
            if not a[row_idx][j].is_zero:
                value = value - a[row_idx][j] * x[j]
        x[col] = value
    return x


def _is_fraction_zero_row(row):
    return all(v.is_zero for v in row)
