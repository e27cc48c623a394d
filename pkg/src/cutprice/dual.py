"""Dual (item) prices for WDP with cuts, and WE / core verification."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .kernel import GE, LE, EQ, LinearProgram, solve_diagonal_qp, solve_lp
from .outcome import Cut, EquilibriumReport, PriceVector
from .rational import ZERO, as_q
from .wdp import Allocation, extended_column, solve_wdp, solve_wdp_lp


class PreconditionError(ValueError):
    pass


def _cost(inst, k, cuts, prices):
    return sum((p * a for p, a in zip(prices, extended_column(inst, k, cuts)) if a and p), ZERO)


def payments_from_prices(inst, xstar: Allocation, prices, cuts=()) -> Tuple:
    pay = [ZERO] * inst.I
    for k in xstar.winning_bids:
        pay[inst.bid_owner[k]] = _cost(inst, k, cuts, prices)
    return tuple(pay)


def price_vector(inst, xstar, prices, cuts=()) -> PriceVector:
    prices = [as_q(v) for v in prices]
    pay = payments_from_prices(inst, xstar, prices, cuts)
    sur = [ZERO] * inst.I
    for k in xstar.winning_bids:
        i = inst.bid_owner[k]
        sur[i] = inst.b[k] - pay[i]
    return PriceVector(tuple(prices[: inst.J]), tuple(prices[inst.J:]), tuple(sur), pay)


def _require_integral(inst, cuts, xstar):
    frac = solve_wdp_lp(inst, cuts=cuts)
    if frac.value != xstar.value:
        raise PreconditionError(
            f"WDP-LP value {frac.value} exceeds integer value {xstar.value}; add cuts first"
        )


def solve_wdp_dual(inst, cuts: Sequence[Cut] = (), xstar: Optional[Allocation] = None) -> PriceVector:
    """Optimal basic solution of the dual of WDP-LP extended by ``cuts``."""
    xstar = solve_wdp(inst) if xstar is None else xstar
    _require_integral(inst, cuts, xstar)
    m = inst.J + len(cuts)
    lp = LinearProgram("min")
    supply = list(inst.c) + [c.rhs for c in cuts]
    for j in range(m):
        lp.add_var(obj=supply[j])
    for i in range(inst.I):
        lp.add_var(obj=1)
    for k in range(inst.K):
        row = {j: a for j, a in enumerate(extended_column(inst, k, cuts)) if a}
        row[m + inst.bid_owner[k]] = 1
        lp.add_constraint(row, GE, inst.b[k])
    res = solve_lp(lp)
    pv = price_vector(inst, xstar, res.x[:m], cuts)
    return PriceVector(pv.natural, pv.artificial, tuple(res.x[m:]), pv.payments)


def _cs_price_program(inst, cuts, xstar) -> LinearProgram:
    """Dual optima at x* written over prices alone (surplus substituted out)."""
    m = inst.J + len(cuts)
    lp = LinearProgram("min")
    used = [sum(inst.A[j][k] for k in xstar.winning_bids) for j in range(inst.J)]
    used += [c.lhs(xstar.selection) for c in cuts]
    supply = list(inst.c) + [c.rhs for c in cuts]
    for j in range(m):
        lp.add_var(lb=0, ub=0 if used[j] < supply[j] else None)
    win = {inst.bid_owner[k]: k for k in xstar.winning_bids}
    cols = [extended_column(inst, k, cuts) for k in range(inst.K)]
    for k in range(inst.K):
        i = inst.bid_owner[k]
        if i in win:
            if k == win[i]:
                continue
            w = win[i]
            row = {j: cols[k][j] - cols[w][j] for j in range(m) if cols[k][j] != cols[w][j]}
            rhs = inst.b[k] - inst.b[w]
        else:
            row = {j: a for j, a in enumerate(cols[k]) if a}
            rhs = inst.b[k]
        if row:
            lp.add_constraint(row, GE, rhs)
        elif rhs > 0:
            lp.add_constraint({0: 0} if m else {}, GE, rhs)
    for i, w in win.items():
        row = {j: a for j, a in enumerate(cols[w]) if a}
        if row:
            lp.add_constraint(row, LE, inst.b[w])
    # objective: revenue p . (A_ext x*)
    for j in range(m):
        lp.objective[j] = as_q(used[j])
    return lp


def solve_quad_dual(inst, cuts: Sequence[Cut] = (), xstar: Optional[Allocation] = None) -> PriceVector:
    """Dual-optimal prices with least revenue, then least ``sum c_j p_j^2``.

    Cut items weigh in with their right-hand side as supply.
    """
    xstar = solve_wdp(inst) if xstar is None else xstar
    _require_integral(inst, cuts, xstar)
    m = inst.J + len(cuts)
    if m == 0:
        return price_vector(inst, xstar, [], cuts)
    lp = _cs_price_program(inst, cuts, xstar)
    first = solve_lp(lp)
    if not first.optimal:
        raise PreconditionError("no dual-optimal prices at the chosen allocation")
    revenue_obj = list(lp.objective)
    lp.add_constraint({j: v for j, v in enumerate(revenue_obj) if v}, EQ, first.objective)
    lp.objective = [ZERO] * m
    weights = [as_q(v) for v in inst.c] + [c.rhs for c in cuts]
    weights = [w if w > 0 else as_q(1) for w in weights]
    res = solve_diagonal_qp(lp, weights)
    return price_vector(inst, xstar, res.x, cuts)


# --------------------------------------------------------------------------
# verification


def verify_we(inst, cuts: Sequence[Cut], xstar: Allocation, prices) -> EquilibriumReport:
    """Envy-freeness over submitted bids, market clearing, and efficiency."""
    if isinstance(prices, PriceVector):
        prices = prices.all_prices
    prices = [as_q(v) for v in prices]
    rep = EquilibriumReport()
    util = [ZERO] * inst.I
    for k in xstar.winning_bids:
        i = inst.bid_owner[k]
        util[i] = inst.b[k] - _cost(inst, k, cuts, prices)
    for i in range(inst.I):
        if util[i] < 0:
            rep.envy_free = False
            rep.envy_violations.extend(k for k in inst.bidder_bids[i] if xstar.selection[k])
    for k in range(inst.K):
        if xstar.selection[k]:
            continue
        if inst.b[k] - _cost(inst, k, cuts, prices) > util[inst.bid_owner[k]]:
            rep.envy_free = False
            rep.envy_violations.append(k)
    rep.envy_violations.sort()
    for j in range(inst.J):
        if prices[j] > 0 and sum(inst.A[j][k] for k in xstar.winning_bids) < inst.c[j]:
            rep.market_cleared = False
            rep.unsold_priced.append(inst.items[j].id)
    for t, cut in enumerate(cuts):
        if prices[inst.J + t] > 0 and cut.lhs(xstar.selection) < cut.rhs:
            rep.market_cleared = False
            rep.unsold_priced.append(f"cut{t + 1}")
    rep.efficient = xstar.value == solve_wdp(inst).value
    return rep


def most_violated_coalition(inst, xstar: Allocation, payments) -> Tuple["Q", Tuple[int, ...]]:
    """Largest core shortfall and the coalition attaining it.

    A coalition C blocks when ``w(C) - sum_{i in C} u_i`` exceeds total
    revenue, where ``u_i`` is bidder i's current utility. Maximising the
    left side is a WDP with each bid reduced by its owner's utility.
    """
    payments = [as_q(v) for v in payments]
    util = [ZERO] * inst.I
    for k in xstar.winning_bids:
        i = inst.bid_owner[k]
        util[i] = inst.b[k] - payments[i]
    amounts = [inst.b[k] - util[inst.bid_owner[k]] for k in range(inst.K)]
    best = solve_wdp(inst, amounts=amounts)
    shortfall = best.value - sum(payments, ZERO)
    return shortfall, tuple(sorted(best.winners))


def verify_core(inst, xstar: Allocation, payments) -> EquilibriumReport:
    rep = EquilibriumReport()
    shortfall, coalition = most_violated_coalition(inst, xstar, payments)
    rep.is_core = shortfall <= 0
    if not rep.is_core:
        rep.blocking_coalition = coalition
        rep.core_violation = shortfall
    return rep
