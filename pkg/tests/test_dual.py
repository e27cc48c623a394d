import pytest

from cutprice.dual import (
    PreconditionError, most_violated_coalition, payments_from_prices, solve_quad_dual,
    solve_wdp_dual, verify_core, verify_we,
)
from cutprice.outcome import Cut
from cutprice.rational import Q
from cutprice.wdp import solve_wdp, solve_wdp_lp


def test_quad_dual_example_1_1(ex):
    inst = ex("ex1_1")
    pv = solve_quad_dual(inst)
    assert pv.natural == (5, 5, 5)
    assert pv.payments == (0, 0, 0, 15)
    rep = verify_we(inst, [], solve_wdp(inst), pv.all_prices)
    assert rep.is_we


def test_quad_dual_example_4(ex):
    pv = solve_quad_dual(ex("ex4"))
    assert pv.natural == (5, 5, 10)
    assert pv.revenue == 20


def test_quad_dual_example_7(ex):
    pv = solve_quad_dual(ex("ex7"))
    assert pv.natural == (6, 6, 6, 6)
    assert pv.revenue == 24


def test_quad_dual_with_cut_example_1(ex):
    inst = ex("ex1")
    cut = Cut.make([1, 1, 1, 1], 1)
    pv = solve_quad_dual(inst, [cut])
    assert pv.natural == (0, 0, 0) and pv.artificial == (10,)
    assert pv.payments[3] == 10


def test_gap_is_a_precondition_error(ex):
    with pytest.raises(PreconditionError):
        solve_quad_dual(ex("ex1"))


def test_lp_dual_matches_primal(ex):
    inst = ex("ex4")
    pv = solve_wdp_dual(inst)
    assert sum(p * c for p, c in zip(pv.natural, inst.c)) + sum(pv.surplus) == solve_wdp_lp(inst).value


def test_verify_we_detects_envy(ex):
    inst = ex("ex1_1")
    x = solve_wdp(inst)
    rep = verify_we(inst, [], x, [4, 4, 4])
    assert not rep.envy_free and set(rep.envy_violations) == {0, 1, 2}
    rep = verify_we(inst, [], x, [6, 6, 6])
    assert not rep.is_we


def test_verify_we_flags_priced_unsold_items():
    from cutprice.model import make_instance
    inst = make_instance({"A": 1, "B": 1}, [("1", [({"A": 1}, 5)])])
    rep = verify_we(inst, [], solve_wdp(inst), [1, 1])
    assert not rep.market_cleared and rep.unsold_priced == ["B"]


def test_core_checks_example_5(ex):
    inst = ex("ex5")
    x = solve_wdp(inst)
    rep = verify_core(inst, x, [25, 25, 25, 0, 0])
    assert not rep.is_core
    assert rep.blocking_coalition is not None
    viol, coalition = most_violated_coalition(inst, x, [25, 25, 25, 0, 0])
    assert viol > 0
    half = Q(115, 2)
    assert verify_core(inst, x, [half, half, half, 0, 0]).is_core


def test_payments_from_prices(ex):
    inst = ex("ex2")
    x = solve_wdp(inst)
    cut = Cut.make([2, 1, 1, 1], 2)
    assert payments_from_prices(inst, x, [0, 40], [cut]) == (80, 0, 0, 0)
