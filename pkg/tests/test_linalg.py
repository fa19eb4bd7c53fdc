"""Exact linear algebra: row spaces, solvers, and integer lattices."""

from fractions import Fraction

import pytest

from weylpbw.linalg import (
    RowSpaceGF,
    RowSpaceQQ,
    ScaledLattice,
    clear_denominators,
    hnf_rows,
    invert_dense,
    rank_dense,
    row_space,
    solve_dense,
    solve_mod_p,
    xgcd,
)


def test_xgcd():
    for a, b in [(12, 18), (0, 5), (5, 0), (-4, 6), (7, 13)]:
        g, x, y = xgcd(a, b)
        assert g == a * x + b * y
        assert g >= 0


def test_clear_denominators_primitive():
    vec = [Fraction(1, 2), Fraction(-1, 3), Fraction(0)]
    out = clear_denominators(vec)
    assert out == [3, -2, 0]


def test_row_space_gf_rank_and_membership():
    sp = RowSpaceGF(5)
    assert sp.insert({0: 1, 1: 2})
    assert sp.insert({1: 1, 2: 1})
    assert not sp.insert({0: 1, 1: 3, 2: 1})   # sum of the first two
    assert sp.rank == 2
    assert sp.contains({0: 2, 1: 4})
    assert sp.contains({})
    assert not sp.contains({2: 1})


def test_row_space_gf_reduces_mod_p():
    sp = RowSpaceGF(3)
    assert sp.insert({0: 3, 1: 1})   # == (0, 1) mod 3
    assert sp.contains({1: 2})
    assert not sp.contains({0: 1})


def test_row_space_qq():
    sp = RowSpaceQQ()
    cleared = clear_denominators([Fraction(1, 2), Fraction(1, 3)])
    assert sp.insert({i: v for i, v in enumerate(cleared)})
    assert not sp.insert({0: 9, 1: 6})         # scalar multiple
    assert sp.insert({0: 1})
    assert sp.rank == 2
    assert sp.contains({0: 7, 1: 10})


def test_row_space_factory():
    assert isinstance(row_space(None), RowSpaceQQ)
    assert isinstance(row_space(7), RowSpaceGF)


def test_solve_dense_round_trip():
    sols = solve_dense([[2, 1], [1, 1]], [[3, 2]])
    assert sols == [[Fraction(1), Fraction(1)]]


def test_solve_dense_singular():
    with pytest.raises(ValueError):
        solve_dense([[1, 1], [2, 2]], [[1, 3]])


def test_solve_mod_p():
    assert solve_mod_p([[2, 1], [1, 1]], [[3, 2]], 5) == [[1, 1]]


def test_invert_dense():
    inv = invert_dense([[2, 1], [1, 1]])
    assert inv == [[Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(2)]]


def test_rank_dense_pivots():
    rank, pivots = rank_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank == 2
    assert pivots == [0, 1]


def test_hnf_rows():
    assert hnf_rows([(2, 4), (6, 8)], 2) == [(2, 0), (0, 4)]
    assert hnf_rows([(1, 2, 3), (2, 4, 6), (0, 0, 5)], 3) == [(1, 2, 3), (0, 0, 5)]


def test_scaled_lattice_finalize():
    sl = ScaledLattice(2)
    sl.insert([Fraction(1, 2), Fraction(0)])
    sl.insert([Fraction(1, 3), Fraction(1, 3)])
    denom, basis = sl.finalize()
    assert denom == 6
    assert basis == [(1, 4), (0, 6)]
    # every inserted vector is an integer combination of basis / denom
    # (1/2, 0) * 6 = (3, 0) = (1,4)*3 - (0,6)*2
    assert (3, 0) == tuple(3 * b - 2 * c for b, c in zip(*basis))
