"""Truncated matrix representations of bosonic modes and exact fermionic
modes, used as the floating-point oracle for the symbolic engine.

Bosonic modes get the standard ladder matrices on a finite occupation
cutoff; fermionic modes are exact on dimension ``2**n`` with graded tensor
signs (a parity string over the fermionic factors to the left).  Matrices
are dense; this is a correctness oracle, not a performance artifact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import (
    DimensionTooLarge,
    RegistryMismatch,
    TruncationTooSmall,
    UnmappedSymbol,
)
from .algebra import FERMION, OperatorPoly, OperatorSymbol
from .scalars import GaussianRational, NumericContext, ScalarPoly

__all__ = [
    "ModeRegistry",
    "MatrixRep",
    "represent",
    "represent_exact",
    "matexp",
    "block_compare",
    "occupation_mask",
]

MAX_DENSE_DIM = 2000


class ModeRegistry:
    """Modes with truncation data plus the symbol-to-generator map.

    Modes are laid out in insertion order; fermionic parity strings run over
    the fermionic modes to the left of the acted-on mode only (bosonic and
    fermionic sectors commute).
    """

    def __init__(self):
        self.modes = []  # (name, kind, dim)
        self._symbol_map = {}
        self._matrix_cache = {}

    # -- mode construction -------------------------------------------------
    def add_boson(self, name: str, truncation: int) -> "ModeRegistry":
        if truncation < 2:
            raise TruncationTooSmall(f"truncation {truncation} below 2")
        self.modes.append((name, "boson", truncation))
        self._matrix_cache.clear()
        return self

    def add_fermion(self, name: str) -> "ModeRegistry":
        self.modes.append((name, FERMION, 2))
        self._matrix_cache.clear()
        return self

    @property
    def dimension(self) -> int:
        dim = 1
        for _, _, d in self.modes:
            dim *= d
        return dim

    def occupations(self) -> np.ndarray:
        """Total occupation of each basis state (bosons + fermion bits)."""
        occ = np.zeros(1)
        for _, _, d in self.modes:
            local = np.arange(d)
            occ = (occ[:, None] + local[None, :]).reshape(-1)
        return occ

    # -- elementary generators ------------------------------------------------
    def _mode_index(self, name):
        for i, (n, _, _) in enumerate(self.modes):
            if n == name:
                return i
        raise UnmappedSymbol(f"unknown mode {name!r}")

    def lowering(self, mode_name: str) -> np.ndarray:
        """Annihilation matrix of the mode, with fermionic parity string."""
        key = ("lower", mode_name)
        if key in self._matrix_cache:
            return self._matrix_cache[key]
        idx = self._mode_index(mode_name)
        out = None
        for i, (name, kind, d) in enumerate(self.modes):
            if i < idx:
                if kind == FERMION and self.modes[idx][1] == FERMION:
                    local = np.diag([1.0, -1.0])  # parity
                else:
                    local = np.eye(d)
            elif i == idx:
                if kind == FERMION:
                    local = np.array([[0.0, 1.0], [0.0, 0.0]])
                else:
                    local = np.diag(np.sqrt(np.arange(1.0, d)), k=1)
            else:
                local = np.eye(d)
            out = local if out is None else np.kron(out, local)
        out = out.astype(complex)
        self._matrix_cache[key] = out
        return out

    def raising(self, mode_name: str) -> np.ndarray:
        return self.lowering(mode_name).conj().T

    # -- symbol mapping ----------------------------------------------------------
    def map_symbol(self, symbol, expr) -> "ModeRegistry":
        """Attach a matrix recipe to an operator symbol.

        ``expr`` is a list of (coefficient, mode_name, kind) triples with
        kind ``lower`` or ``raise``; coefficients may be numbers or scalar
        polynomials evaluated against the numeric context at build time.
        """
        name = symbol.name if isinstance(symbol, OperatorSymbol) else symbol
        self._symbol_map[name] = list(expr)
        return self

    def map_ladder(self, symbol, mode_name: str, kind: str) -> "ModeRegistry":
        return self.map_symbol(symbol, [(1, mode_name, kind)])

    def symbol_matrix(self, name: str, ctx=None) -> np.ndarray:
        if name not in self._symbol_map:
            raise UnmappedSymbol(f"operator symbol {name!r} has no matrix recipe")
        total = np.zeros((self.dimension, self.dimension), dtype=complex)
        for coeff, mode_name, kind in self._symbol_map[name]:
            if isinstance(coeff, ScalarPoly):
                value = coeff.evaluate(ctx if ctx is not None else {})
            elif isinstance(coeff, GaussianRational):
                value = complex(coeff)
            else:
                value = complex(coeff)
            base = self.lowering(mode_name) if kind == "lower" else self.raising(mode_name)
            total = total + value * base
        return total


class MatrixRep:
    """Dense complex matrix tied to a mode registry."""

    __slots__ = ("data", "registry")

    def __init__(self, data, registry: ModeRegistry):
        self.data = np.asarray(data, dtype=complex)
        self.registry = registry

    @property
    def dimension(self):
        return self.data.shape[0]

    def __matmul__(self, other):
        if isinstance(other, MatrixRep):
            if other.registry is not self.registry:
                raise RegistryMismatch("matrix representations from different registries")
            return MatrixRep(self.data @ other.data, self.registry)
        return MatrixRep(self.data @ other, self.registry)

    def dagger(self) -> "MatrixRep":
        return MatrixRep(self.data.conj().T, self.registry)

    def __add__(self, other):
        if isinstance(other, MatrixRep):
            if other.registry is not self.registry:
                raise RegistryMismatch("matrix representations from different registries")
            return MatrixRep(self.data + other.data, self.registry)
        return MatrixRep(self.data + other, self.registry)

    def __sub__(self, other):
        other_data = other.data if isinstance(other, MatrixRep) else other
        return MatrixRep(self.data - other_data, self.registry)

    def __mul__(self, scalar):
        return MatrixRep(self.data * scalar, self.registry)

    __rmul__ = __mul__

    def to_json_rows(self):
        return [
            [[float(z.real), float(z.imag)] for z in row] for row in self.data
        ]


def represent(p, registry: ModeRegistry, ctx=None) -> MatrixRep:
    """Matrix of an operator polynomial: linear, word-multiplicative.

    Every symbol must have a matrix recipe; every scalar symbol appearing in
    a coefficient must be assigned in ``ctx``.
    """
    p = OperatorPoly.coerce(p)
    if isinstance(ctx, NumericContext):
        assignments = ctx.assignments
    else:
        assignments = dict(ctx or {})
    dim = registry.dimension
    total = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    sym_cache = {}
    for word, coeff in p.terms.items():
        factor = eye
        for sym in word:
            mat = sym_cache.get(sym.name)
            if mat is None:
                mat = registry.symbol_matrix(sym.name, assignments)
                sym_cache[sym.name] = mat
            factor = factor @ mat
        total = total + coeff.evaluate(assignments) * factor
    return MatrixRep(total, registry)


def represent_exact(p, registry: ModeRegistry) -> list:
    """Exact Gaussian-rational matrix for fermion-only registries.

    Fermionic ladder matrices have entries 0 and ±1, so words and
    polynomials with exact coefficients stay exact; returns a nested list of
    GaussianRational entries.
    """
    if any(kind != FERMION for _, kind, _ in registry.modes):
        raise UnmappedSymbol("exact representation requires a fermion-only registry")
    p = OperatorPoly.coerce(p)
    dim = registry.dimension
    zero = GaussianRational(0)

    def exact_symbol(name):
        recipe = registry._symbol_map.get(name)
        if recipe is None:
            raise UnmappedSymbol(f"operator symbol {name!r} has no matrix recipe")
        out = [[zero] * dim for _ in range(dim)]
        for coeff, mode_name, kind in recipe:
            if isinstance(coeff, ScalarPoly):
                c = coeff.constant_value()
            elif isinstance(coeff, GaussianRational):
                c = coeff
            else:
                c = GaussianRational(Fraction(coeff))
            base = (
                registry.lowering(mode_name)
                if kind == "lower"
                else registry.raising(mode_name)
            )
            for i in range(dim):
                for j in range(dim):
                    # fermionic ladder entries are 0 or +-1 exactly
                    v = int(base[i, j].real)
                    if v:
                        out[i][j] = out[i][j] + c * v
        return out

    def mat_mul(x, y):
        out = [[zero] * dim for _ in range(dim)]
        for i in range(dim):
            for k in range(dim):
                if x[i][k].is_zero:
                    continue
                xv = x[i][k]
                for j in range(dim):
                    if y[k][j].is_zero:
                        continue
                    out[i][j] = out[i][j] + xv * y[k][j]
        return out

    total = [[zero] * dim for _ in range(dim)]
    identity = [
        [GaussianRational(1) if i == j else zero for j in range(dim)]
        for i in range(dim)
    ]
    cache = {}
    for word, coeff in p.terms.items():
        factor = identity
        for sym in word:
            if sym.name not in cache:
                cache[sym.name] = exact_symbol(sym.name)
            factor = mat_mul(factor, cache[sym.name])
        c = coeff.constant_value()
        for i in range(dim):
            for j in range(dim):
                if not factor[i][j].is_zero:
                    total[i][j] = total[i][j] + c * factor[i][j]
    return total


def matexp(m: MatrixRep) -> MatrixRep:
    """Matrix exponential by scaling and squaring."""
    if m.dimension > MAX_DENSE_DIM:
        raise DimensionTooLarge(
            f"dimension {m.dimension} exceeds the dense cap {MAX_DENSE_DIM}"
        )
    return MatrixRep(scipy.linalg.expm(m.data), m.registry)


def occupation_mask(registry: ModeRegistry, max_occupation) -> np.ndarray:
    return registry.occupations() <= max_occupation


def block_compare(a: MatrixRep, b: MatrixRep, max_occupation) -> float:
    """Max abs difference on basis states with occupation below the cutoff."""
    if a.registry is not b.registry:
        raise RegistryMismatch("matrix representations from different registries")
    mask = occupation_mask(a.registry, max_occupation)
    sub_a = a.data[np.ix_(mask, mask)]
    sub_b = b.data[np.ix_(mask, mask)]
    if sub_a.size == 0:
        return 0.0
    return float(np.max(np.abs(sub_a - sub_b)))
