from fractions import Fraction as F

from steintile.exactlp import feasible_nonnegative


def check_solution(rows, rhs, x):
    assert x is not None
    assert all(v >= 0 for v in x)
    for row, b in zip(rows, rhs):
        assert sum(a * v for a, v in zip(row, x)) == F(b)


def test_simple_feasible_system():
    rows = [[1, 1], [1, -1]]
    rhs = [2, 0]
    x = feasible_nonnegative(rows, rhs)
    check_solution(rows, rhs, x)
    assert x == [F(1), F(1)]


def test_infeasible_system():
    # x1 + x2 = 1 and x1 + x2 = 2 cannot both hold
    assert feasible_nonnegative([[1, 1], [1, 1]], [1, 2]) is None
    # nonnegativity makes this one infeasible
    assert feasible_nonnegative([[1, 1]], [-1]) is None


def test_redundant_rows_are_fine():
    rows = [[1, 1], [2, 2], [1, 0]]
    rhs = [3, 6, 1]
    check_solution(rows, rhs, feasible_nonnegative(rows, rhs))


def test_rational_coefficients():
    rows = [[F(1, 2), F(1, 3)], [F(1, 4), -F(1, 3)]]
    rhs = [F(5, 6), -F(1, 12)]
    check_solution(rows, rhs, feasible_nonnegative(rows, rhs))


def test_degenerate_and_zero_cases():
    assert feasible_nonnegative([], []) == []
    assert feasible_nonnegative([[0, 0]], [0]) == [0, 0]
    assert feasible_nonnegative([[0]], [1]) is None


def test_negative_rhs_is_normalized():
    rows = [[-1, 0], [0, 1]]
    rhs = [-2, 3]
    check_solution(rows, rhs, feasible_nonnegative(rows, rhs))
