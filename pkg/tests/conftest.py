"""Shared fixtures: standard mode algebras and ordering pairs."""

from fractions import Fraction

import pytest

from opwick import (
    FERMION,
    BasisChange,
    CommutationTable,
    OperatorSymbol,
    Ordering,
    ScalarPoly,
)


@pytest.fixture
def boson_mode():
    """Single bosonic mode: a, a† with [a, a†] = 1."""
    a = OperatorSymbol("a")
    ad = OperatorSymbol("a†", dagger=True)
    table = CommutationTable([a, ad], {("a", "a†"): ScalarPoly.one()})
    return a, ad, table


@pytest.fixture
def two_boson_modes():
    """Two bosonic modes a, b with unit commutators and vanishing cross terms."""
    a = OperatorSymbol("a", key=0)
    ad = OperatorSymbol("a†", key=0, dagger=True)
    b = OperatorSymbol("b", key=1)
    bd = OperatorSymbol("b†", key=1, dagger=True)
    table = CommutationTable(
        [a, ad, b, bd],
        {
            ("a", "a†"): ScalarPoly.one(),
            ("b", "b†"): ScalarPoly.one(),
            ("a", "b"): ScalarPoly.zero(),
            ("a", "b†"): ScalarPoly.zero(),
            ("a†", "b"): ScalarPoly.zero(),
            ("a†", "b†"): ScalarPoly.zero(),
        },
    )
    return (a, ad, b, bd), table


@pytest.fixture
def fermion_timed():
    """Two fermionic modes with time labels; annihilator of mode 1 is latest."""
    c1 = OperatorSymbol("c1", FERMION, key=4)
    c1d = OperatorSymbol("c1†", FERMION, key=1, dagger=True)
    c2 = OperatorSymbol("c2", FERMION, key=2)
    c2d = OperatorSymbol("c2†", FERMION, key=3, dagger=True)
    table = CommutationTable(
        [c1, c1d, c2, c2d],
        {
            ("c1", "c1†"): ScalarPoly.one(),
            ("c2", "c2†"): ScalarPoly.one(),
            ("c1", "c2"): ScalarPoly.zero(),
            ("c1", "c2†"): ScalarPoly.zero(),
            ("c2", "c1†"): ScalarPoly.zero(),
            ("c1†", "c2†"): ScalarPoly.zero(),
        },
    )
    return (c1, c1d, c2, c2d), table


@pytest.fixture
def quadrature_basis(boson_mode):
    """q, p expanded over a, a† with the normalization symbol s (s**2 = 1/2)."""
    a, ad, table = boson_mode
    s = ScalarPoly.symbol("s")
    i = ScalarPoly.i()
    q = OperatorSymbol("q")
    p = OperatorSymbol("p")
    basis = BasisChange(
        [q, p],
        [a, ad],
        {
            ("q", "a"): s,
            ("q", "a†"): s,
            ("p", "a"): -i * s,
            ("p", "a†"): i * s,
        },
    )
    return q, p, basis, table


@pytest.fixture
def orderings():
    return {
        "N": Ordering.normal(),
        "A": Ordering.antinormal(),
        "W": Ordering.weyl(),
        "T": Ordering.time_descending(),
        "Nf": Ordering.normal(signature=-1),
        "qp": Ordering.explicit("qp", ["q", "p"]),
    }


def half():
    return ScalarPoly.const(Fraction(1, 2))
