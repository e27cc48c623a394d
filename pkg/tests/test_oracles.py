from fractions import Fraction

import oracles


def test_lp_oracle_square():
    rows = [((1, 0), 2), ((0, 1), 3), ((-1, 0), 0), ((0, -1), 0), ((1, 1), 4)]
    assert oracles.lp_optimum((1, 1), rows, 2) == 4
    assert oracles.lp_optimum((2, 1), rows, 2) == 6


def test_qp_oracle_projection():
    # closest point to (3, 3) in x + y <= 2
    val, x = oracles.qp_optimum((1, 1), (-6, -6), [((1, 1), 2)], 2)
    assert x == [1, 1]
    assert val == 2 - 12


def test_ip_oracle():
    assert oracles.ip_optimum((3, 2), [((2, 2), 5)], [(0, 3), (0, 3)]) == 6


def test_solve_linear_singular():
    assert oracles.solve_linear([[1, 2], [2, 4]], [1, 2]) is None
    assert oracles.solve_linear([[2]], [1]) == [Fraction(1, 2)]
