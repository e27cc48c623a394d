from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cutprice.kernel import (
    EQ, GE, INFEASIBLE, LE, UNBOUNDED, LinearProgram, LPError,
    solve_diagonal_qp, solve_lp, solve_mip,
)
from cutprice.rational import Q

small = st.integers(-5, 5)


def box_rows(n, hi):
    rows = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        rows.append((tuple(e), hi))
        rows.append((tuple(-v for v in e), 0))
    return rows


def build(sense, c, rows, hi, kind="C"):
    lp = LinearProgram(sense)
    for cj in c:
        lp.add_var(cj, 0, hi, kind)
    for a, b in rows:
        lp.add_constraint(list(a), LE, b)
    return lp


@settings(max_examples=150, deadline=None)
@given(
    n=st.integers(1, 3),
    data=st.data(),
)
def test_lp_matches_vertex_enumeration(n, data):
    c = data.draw(st.lists(small, min_size=n, max_size=n))
    m = data.draw(st.integers(0, 3))
    rows = [
        (tuple(data.draw(st.lists(small, min_size=n, max_size=n))), data.draw(st.integers(-3, 8)))
        for _ in range(m)
    ]
    hi = 4
    lp = build("max", c, rows, hi)
    res = solve_lp(lp)
    ref = oracles.lp_optimum(c, rows + box_rows(n, hi), n)
    if ref is None:
        assert res.status == INFEASIBLE
    else:
        assert res.optimal
        assert res.objective == ref
        assert lp.residuals_ok(res.x)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 3), data=st.data())
def test_mip_matches_integer_enumeration(n, data):
    c = data.draw(st.lists(small, min_size=n, max_size=n))
    rows = [
        (tuple(data.draw(st.lists(small, min_size=n, max_size=n))), data.draw(st.integers(-2, 9)))
        for _ in range(data.draw(st.integers(1, 3)))
    ]
    lp = build("max", c, rows, 3, "I")
    res = solve_mip(lp)
    ref = oracles.ip_optimum(c, rows, [(0, 3)] * n)
    if ref is None:
        assert res.status == INFEASIBLE
    else:
        assert res.objective == ref
        assert all(v.denominator == 1 for v in res.x)


def test_lp_duals_close_the_gap():
    # max 3x + 2y, x + y <= 4, x + 3y <= 6
    lp = LinearProgram("max")
    lp.add_vars(2)
    lp.objective = [Q(3), Q(2)]
    lp.add_constraint([1, 1], LE, 4)
    lp.add_constraint([1, 3], LE, 6)
    res = solve_lp(lp)
    assert res.objective == 12
    assert sum(y * r.rhs for y, r in zip(res.duals, lp.rows)) == 12


def test_lp_equality_and_free_vars():
    lp = LinearProgram("min")
    x = lp.add_var(1, None, None)
    y = lp.add_var(1, None, None)
    lp.add_constraint({x: 1, y: -1}, EQ, 2)
    lp.add_constraint({x: 1, y: 1}, GE, Q(1, 3))
    res = solve_lp(lp)
    assert res.objective == Q(1, 3)
    assert res.x[x] - res.x[y] == 2


def test_lp_unbounded_and_infeasible():
    lp = LinearProgram("max")
    lp.add_var(1)
    assert solve_lp(lp).status == UNBOUNDED
    lp = LinearProgram("max")
    lp.add_var(1, 0, 1)
    lp.add_constraint([1], GE, 2)
    assert solve_lp(lp).status == INFEASIBLE


def test_lp_rejects_bad_rows():
    lp = LinearProgram()
    lp.add_var()
    with pytest.raises(LPError):
        lp.add_constraint([1, 2], LE, 0)
    with pytest.raises(LPError):
        lp.add_constraint({3: 1}, LE, 0)
    with pytest.raises(LPError):
        lp.add_constraint([1], "!=", 0)


def test_lp_degenerate_cycle_prone():
    # Beale's example cycles under Dantzig's rule without anti-cycling
    lp = LinearProgram("min")
    lp.add_vars(4)
    lp.objective = [Q(-3, 4), Q(150), Q(-1, 50), Q(6)]
    lp.add_constraint([Q(1, 4), -60, Q(-1, 25), 9], LE, 0)
    lp.add_constraint([Q(1, 2), -90, Q(-1, 50), 3], LE, 0)
    lp.add_constraint([0, 0, 1, 0], LE, 1)
    res = solve_lp(lp)
    assert res.objective == Q(-1, 20)


def test_mip_ties_are_deterministic():
    lp = LinearProgram("max")
    for _ in range(3):
        lp.add_var(1, kind="B")
    lp.add_constraint([1, 1, 1], LE, 1)
    a, b = solve_mip(lp), solve_mip(lp)
    assert a.objective == 1 and a.x == b.x


def test_mip_lex_weighting_picks_smallest():
    # encode lexicographic preference in the objective: 4, 2, 1 scaled below 1
    lp = LinearProgram("max")
    for wt in (Q(-4, 100), Q(-2, 100), Q(-1, 100)):
        lp.add_var(1 + wt, kind="B")
    lp.add_constraint([1, 1, 1], LE, 1)
    assert [int(v) for v in solve_mip(lp).x] == [0, 0, 1]


def test_mip_lazy_separator():
    lp = LinearProgram("max")
    lp.add_var(1, 0, 5, "I")
    lp.add_var(1, 0, 5, "I")

    def sep(x):
        if x[0] + x[1] > 3:
            return [({0: 1, 1: 1}, LE, 3)]
        return []

    res = solve_mip(lp, separator=sep)
    assert res.objective == 3


@settings(max_examples=80, deadline=None)
@given(n=st.integers(1, 3), data=st.data())
def test_qp_matches_active_set_oracle(n, data):
    w = data.draw(st.lists(st.integers(1, 4), min_size=n, max_size=n))
    g = data.draw(st.lists(st.integers(-8, 8), min_size=n, max_size=n))
    rows = [
        (tuple(data.draw(st.lists(small, min_size=n, max_size=n))), data.draw(st.integers(0, 6)))
        for _ in range(data.draw(st.integers(0, 2)))
    ]
    lp = build("min", g, rows, 3)
    res = solve_diagonal_qp(lp, w)
    ref = oracles.qp_optimum(w, g, rows + box_rows(n, 3), n)
    assert res.optimal
    assert res.objective == ref[0]
    assert [Fraction(int(v.numerator), int(v.denominator)) for v in res.x] == ref[1]


def test_qp_psd_weights_use_lemke():
    # min y^2 - x  with x + y <= 2, x, y >= 0 ; x is linear only
    lp = LinearProgram("min")
    lp.add_var(-1)
    lp.add_var(0)
    lp.add_constraint([1, 1], LE, 2)
    res = solve_diagonal_qp(lp, [0, 1])
    assert res.x == [2, 0]
    assert res.objective == -2


def test_qp_equality_locked_revenue():
    # split 10 as evenly as possible between two prices
    lp = LinearProgram("min")
    lp.add_vars(2)
    lp.add_constraint([1, 1], EQ, 10)
    res = solve_diagonal_qp(lp, [1, 1])
    assert res.x == [5, 5]
    res = solve_diagonal_qp(lp, [1, 4])
    assert res.x == [8, 2]


def test_qp_rejects_negative_weight():
    lp = LinearProgram()
    lp.add_var()
    with pytest.raises(ValueError):
        solve_diagonal_qp(lp, [-1])
