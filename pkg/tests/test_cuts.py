import pytest

from cutprice.allocations import direction_matrix, enumerate_feasible_allocations
from cutprice.cuts import awe_loop, core_point_to_awe, describe_cut, find_max_violated_cut, integerize_cut
from cutprice.outcome import Cut
from cutprice.rational import Q
from cutprice.wdp import solve_wdp, solve_wdp_lp


def coeffs(cut):
    return tuple(int(v) for v in cut.coeffs), int(cut.rhs)


def valid(inst, cut):
    return all(cut.lhs(a.selection) <= cut.rhs for a in enumerate_feasible_allocations(inst))


@pytest.mark.parametrize("name, expected", [
    ("ex1", [((1, 1, 1, 1), 1)]),
    ("ex1_1", []),
    ("ex2", [((2, 1, 1, 1), 2)]),
    ("ex3", [((1, 1, 1, 1, 1, 2), 2)]),
    ("ex6", [((1, 1, 1, 0), 2), ((1, 1, 0, 1), 2)]),
])
def test_awe_loop_cuts(ex, name, expected):
    inst = ex(name)
    cuts, pv, trace = awe_loop(inst)
    assert [coeffs(c) for c in cuts] == expected
    assert all(valid(inst, c) for c in cuts)
    x = solve_wdp(inst)
    assert solve_wdp_lp(inst, cuts=cuts).value == x.value


def test_awe_loop_example_1_prices(ex):
    cuts, pv, _ = awe_loop(ex("ex1"))
    assert pv.all_prices == (0, 0, 0, 10)
    assert pv.payments[3] == 10


def test_awe_loop_example_5(ex):
    inst = ex("ex5")
    cuts, pv, trace = awe_loop(inst)
    assert sorted(coeffs(c) for c in cuts) == [((1, 1, 1, 0, 2), 3), ((1, 1, 1, 1, 1), 3)]
    # LP bound falls monotonically onto the integer optimum
    assert list(trace) == sorted(trace, reverse=True) and trace[-1] == solve_wdp(inst).value


def test_max_violated_cut_is_violated(ex):
    inst = ex("ex1")
    x = solve_wdp(inst)
    xf = solve_wdp_lp(inst)
    cut = find_max_violated_cut(x, xf, direction_matrix(inst, x), inst)
    assert cut.lhs(xf.x) > cut.rhs
    assert cut.lhs(x.selection) == cut.rhs
    assert valid(inst, integerize_cut(cut))


def test_integerize_scales_to_primitive_integers():
    cut = integerize_cut(Cut.make([Q(1, 2), Q(1, 2), 1], 1))
    assert cut.coeffs == (1, 1, 2) and cut.rhs == 2


def test_core_point_to_awe_example_4(ex):
    inst = ex("ex4")
    x = solve_wdp(inst)
    pv, cut = core_point_to_awe(inst, [10, 0, 0], x)
    assert pv.payments == (10, 0, 0)
    assert cut is not None and valid(inst, cut)


def test_core_point_to_awe_example_6(ex):
    inst = ex("ex6")
    x = solve_wdp(inst)
    pv, cut = core_point_to_awe(inst, [55, 55, 0, 0], x)
    assert pv.payments[:2] == (55, 55)
    assert valid(inst, cut)


def test_describe_cut():
    assert describe_cut(Cut.make([1, 1, 1, 1, 1], 3)) == "at most 3 of bids {1,2,3,4,5} can win"
    text = describe_cut(Cut.make([1, 1, 1, 0, 2], 3))
    assert "bid 5 counts twice" in text
    assert describe_cut(Cut.make([0, 0], 0)) == "trivial cut"
