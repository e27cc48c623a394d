import pytest

from cutprice.allocations import direction_matrix, enumerate_feasible_allocations
from cutprice.dual import solve_quad_dual, verify_core, verify_we
from cutprice.kernel import solve_mip
from cutprice.outcome import Cut
from cutprice.pme import (
    LIFT_MODES, build_dbar, check_pme, elaborate_basis, enumerate_kernel_cuts, find_alpha_bar,
    alpha_bar_mip, kernel_nullity, map_prices, price_cuts,
)
from cutprice.rational import Q
from cutprice.wdp import solve_wdp


def ints(v):
    return tuple(int(a) for a in v)


def setup(inst):
    x = solve_wdp(inst)
    D = direction_matrix(inst, x)
    ab = find_alpha_bar(inst, x, D)
    return x, D, ab


def test_check_pme_example_1_1(ex):
    inst = ex("ex1_1")
    x = solve_wdp(inst)
    for method in ("wdp", "enumerate"):
        rep = check_pme(inst, [], x, [5, 5, 5], method=method)
        assert not rep.is_pme
        assert rep.revenue == 15 and rep.shortfall == {3: 5}


def test_check_pme_accepts_map_example_1_1(ex):
    inst = ex("ex1_1")
    out = map_prices(inst)
    assert out.payments[3] == 10
    for method in ("wdp", "enumerate"):
        assert check_pme(inst, out.cuts, out.allocation, out.prices.all_prices, method=method).is_pme


def test_check_pme_rejects_non_we(ex):
    inst = ex("ex1_1")
    with pytest.raises(ValueError):
        check_pme(inst, [], solve_wdp(inst), [1, 1, 1])


def test_nwe_example_7_is_not_pme(ex):
    inst = ex("ex7")
    x = solve_wdp(inst)
    rep = check_pme(inst, [], x, solve_quad_dual(inst).all_prices)
    assert not rep.is_pme
    assert set(rep.shortfall) == {1, 2}


@pytest.mark.parametrize("name", ["ex1", "ex1_1", "ex2", "ex3", "ex4", "ex5", "ex6"])
def test_big_m_mip_agrees_with_scenario_search(ex, name):
    inst = ex(name)
    x, D, ab = setup(inst)
    lp, _ = alpha_bar_mip(inst, x, D)
    assert solve_mip(lp).objective == sum(ab.alpha)


def test_alpha_bar_example_1_1(ex):
    x, D, ab = setup(ex("ex1_1"))
    assert ab.alpha == (10, 10, 10, 10)
    assert ab.revenue == 10


def test_dbar_and_nullity_example_5(ex):
    inst = ex("ex5")
    x, D, ab = setup(inst)
    dbar = build_dbar(ab.alpha, D, x)
    assert dbar.critical == [0, 1, 2, 3, 4]
    assert kernel_nullity(dbar) == 2


def test_elaboration_matches_kernel_search_examples_5_and_6(ex):
    for name in ("ex5", "ex6"):
        inst = ex(name)
        x, D, ab = setup(inst)
        dbar = build_dbar(ab.alpha, D, x)
        a = sorted(ints(c) for c in elaborate_basis(dbar, D, ab.alpha, inst).cuts)
        b = sorted(ints(c) for c in enumerate_kernel_cuts(dbar, D, x))
        assert a == b


def test_example_6_excludes_dominated_sum(ex):
    inst = ex("ex6")
    x, D, ab = setup(inst)
    cuts = sorted(ints(c) for c in elaborate_basis(build_dbar(ab.alpha, D, x), D, ab.alpha, inst).cuts)
    assert cuts == [(1, 1, 0, 1), (1, 1, 1, 0)]
    assert (2, 2, 1, 1) not in cuts


def test_price_cuts_exact_cover():
    prices, r = price_cuts([[1, 1, 1, 1, 1], [1, 1, 1, 0, 2]], [Q(115, 2)] * 3 + [25, 90])
    assert prices == [25, Q(65, 2)]
    assert all(v == 0 for v in r)


@pytest.mark.parametrize("name, payments", [
    ("ex1", (0, 0, 0, 10)),
    ("ex1_1", (0, 0, 0, 10)),
    ("ex2", (80, 0, 0, 0)),
    ("ex4", (15, 5, 0)),
    ("ex5", (Q(115, 2),) * 3 + (0, 0)),
    ("ex6", (55, 55, 0, 0)),
    ("ex7", (12, 4, 4)),
])
def test_map_payments(ex, name, payments):
    inst = ex(name)
    out = map_prices(inst)
    assert out.payments == payments
    assert out.certificates == {"we": True, "core": True, "pme": True}
    feas = enumerate_feasible_allocations(inst)
    for cut in out.cuts:
        assert cut.is_integral()
        assert all(cut.lhs(a.selection) <= cut.rhs for a in feas)


def test_map_example_3_lifts_bid_6(ex):
    inst = ex("ex3")
    out = map_prices(inst)
    assert [ints(c.coeffs) for c in out.cuts] == [(1, 1, 1, 1, 1, 2)]
    assert 5 in out.extra["noncritical"]
    assert out.prices.all_prices == (2, 0, 1, 0, 0, 16)
    assert out.payments[2] == 17 and out.payments[4] == 18


@pytest.mark.parametrize("mode", LIFT_MODES)
def test_lift_modes_all_certify(ex, mode):
    inst = ex("ex3")
    out = map_prices(inst, mode)
    x = out.allocation
    if mode == "nc-nonlinear-only":
        assert out.extra["nc_lump_sums"]
    else:
        assert verify_we(inst, out.cuts, x, out.prices.all_prices).is_we
    assert verify_core(inst, x, out.payments).is_core


def test_map_without_competition_is_free():
    from cutprice.model import make_instance
    inst = make_instance({"A": 1}, [("1", [({"A": 1}, 7)])])
    out = map_prices(inst)
    assert out.payments == (0,) and out.cuts == []


def test_elaboration_completes_when_greedy_cuts_miss_alpha():
    # greedy kernel cuts span the kernel but not a cone holding alpha-bar here
    from cutprice.generate import GenParams, generate_random_instance
    inst = generate_random_instance(GenParams(items=6, bidders=8, max_bids_per_bidder=3, max_supply=3), 20, "single-minded")
    x, D, ab = setup(inst)
    dbar = build_dbar(ab.alpha, D, x)
    elab = elaborate_basis(dbar, D, ab.alpha, inst)
    assert len(elab.cuts) > 0 and all(p > 0 for p in elab.prices)
    for k in dbar.critical:
        assert sum(p * c[k] for p, c in zip(elab.prices, elab.cuts)) == ab.alpha[k]
    out = map_prices(inst)
    assert out.certificates == {"we": True, "core": True, "pme": True}
