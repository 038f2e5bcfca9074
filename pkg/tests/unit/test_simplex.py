"""Unit tests for simplex module."""

from fractions import Fraction

import pytest

from src.errors import LPError, PreconditionError
from src.simplex import LinearProgram, solve_exact


def make_lp(objective, rows, num_vars=2):
    lp = LinearProgram(num_vars, {j: Fraction(v) for j, v in enumerate(objective)})
    for coeffs, rel, rhs in rows:
        lp.add_row({j: Fraction(v) for j, v in enumerate(coeffs)}, rel, rhs)
    return lp


def test_feasible_origin_with_duals():
    lp = make_lp([3, 2], [([1, 1], "<=", 4), ([1, 3], "<=", 9), ([1, 0], "<=", 3)])

    solution = solve_exact(lp)

    assert solution.status == "optimal"
    assert solution.value == 11
    assert solution.x == [3, 1]
    assert solution.duals == [2, 0, 1]


def test_phase_one_for_covering_rows():
    """min x + y over x + 2y >= 4, 3x + y >= 6, written as a maximisation."""
    lp = make_lp([-1, -1], [([1, 2], ">=", 4), ([3, 1], ">=", 6)])

    solution = solve_exact(lp)

    assert solution.status == "optimal"
    assert solution.value == Fraction(-14, 5)
    assert solution.x == [Fraction(8, 5), Fraction(6, 5)]
    assert sum(d * row.rhs for d, row in zip(solution.duals, lp.rows)) == solution.value


def test_equality_rows():
    lp = make_lp([1, 0], [([1, 1], "==", 2)])

    solution = solve_exact(lp)

    assert solution.value == 2
    assert solution.x == [2, 0]


def test_infeasible_and_unbounded():
    clash = make_lp([1, 0], [([1, 0], ">=", 3), ([1, 0], "<=", 1)])
    assert solve_exact(clash).status == "infeasible"
    assert solve_exact(make_lp([1, 0], [([1, -1], "<=", 1)])).status == "unbounded"
    assert solve_exact(make_lp([0, 0], [])).value == 0


def test_degenerate_lp_terminates():
    """A textbook LP on which the largest-coefficient rule cycles."""
    lp = make_lp(
        [10, -57, -9, -24],
        [
            (["1/2", "-11/2", "-5/2", 9], "<=", 0),
            (["1/2", "-3/2", "-1/2", 1], "<=", 0),
            ([1, 0, 0, 0], "<=", 1),
        ],
        num_vars=4,
    )

    solution = solve_exact(lp)

    assert solution.status == "optimal"
    assert solution.value == 1


def test_row_validation_and_pivot_cap():
    lp = LinearProgram(2, {0: Fraction(1)})
    with pytest.raises(PreconditionError):
        lp.add_row({2: Fraction(1)}, "<=", 1)

    lp.add_row({0: Fraction(1)}, "<=", 1)
    with pytest.raises(LPError):
        solve_exact(lp, max_pivots=0)
