"""Benchmark payment rules: VCG, minimum-revenue core, pay-as-bid."""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .dual import most_violated_coalition, verify_core
from .kernel import EQ, GE, LinearProgram, solve_diagonal_qp, solve_lp
from .outcome import PricingOutcome
from .rational import ZERO, as_q
from .wdp import Allocation, solve_wdp


class CapacityError(RuntimeError):
    pass


def _outcome(rule, inst, xstar, pay, **extra):
    out = PricingOutcome(rule, xstar, tuple(pay), extra=dict(extra))
    out.certificates["core"] = verify_core(inst, xstar, pay).is_core
    return out


def vcg_payments(inst, xstar: Optional[Allocation] = None) -> PricingOutcome:
    """Each winner pays the value it displaces: w(I-i) - w(I-i, c - a^i*)."""
    xstar = solve_wdp(inst) if xstar is None else xstar
    pay = [ZERO] * inst.I
    for k in xstar.winning_bids:
        i = inst.bid_owner[k]
        others = [h for h in range(inst.I) if h != i]
        reduced = [inst.c[j] - inst.A[j][k] for j in range(inst.J)]
        pay[i] = solve_wdp(inst, others).value - solve_wdp(inst, others, reduced).value
    return _outcome("vcg", inst, xstar, pay)


def pay_as_bid(inst, xstar: Optional[Allocation] = None) -> PricingOutcome:
    xstar = solve_wdp(inst) if xstar is None else xstar
    pay = [ZERO] * inst.I
    for k in xstar.winning_bids:
        pay[inst.bid_owner[k]] = inst.b[k]
    return _outcome("paybid", inst, xstar, pay)


def _core_row(inst, xstar, coalition):
    """Core row: winners outside C pay at least w(C) - sum of C's winning bids."""
    win = {inst.bid_owner[k]: k for k in xstar.winning_bids}
    C = set(coalition)
    rhs = solve_wdp(inst, C).value - sum((inst.b[win[i]] for i in C if i in win), ZERO)
    return {i: 1 for i in win if i not in C}, rhs


def _core_program(inst, xstar):
    lp = LinearProgram("min")
    win = {inst.bid_owner[k]: k for k in xstar.winning_bids}
    for i in range(inst.I):
        lp.add_var(obj=1, lb=0, ub=inst.b[win[i]] if i in win else 0)
    return lp


def _core_separator(inst, xstar):
    def sep(x):
        shortfall, coalition = most_violated_coalition(inst, xstar, x)
        if shortfall <= 0:
            return []
        row, rhs = _core_row(inst, xstar, coalition)
        return [(row, GE, rhs)]

    return sep


def _solve_core_lp(inst, xstar, lp):
    sep = _core_separator(inst, xstar)
    while True:
        res = solve_lp(lp)
        rows = sep(res.x)
        if not rows:
            return res
        for row, rel, rhs in rows:
            lp.add_constraint(row, rel, rhs)


def min_core_revenue(inst, xstar: Optional[Allocation] = None):
    xstar = solve_wdp(inst) if xstar is None else xstar
    return _solve_core_lp(inst, xstar, _core_program(inst, xstar)).objective


def mrc_payments(inst, xstar: Optional[Allocation] = None) -> PricingOutcome:
    """Minimum core revenue, split by least sum of squared payments."""
    xstar = solve_wdp(inst) if xstar is None else xstar
    lp = _core_program(inst, xstar)
    first = _solve_core_lp(inst, xstar, lp)
    lp.add_constraint({i: 1 for i in range(inst.I)}, EQ, first.objective)
    lp.objective = [ZERO] * inst.I
    res = solve_diagonal_qp(lp, [1] * inst.I, separator=_core_separator(inst, xstar))
    return _outcome("mrc", inst, xstar, res.x, tie_break="least squares")


def check_coalitional_submodularity(inst, max_bidders: int = 10):
    """Return ``(True, None)`` or ``(False, (S, T, i))`` with marginals rising from S to T."""
    n = inst.I
    if n > max_bidders:
        raise CapacityError(f"{n} bidders exceeds submodularity bound {max_bidders}")
    w = {}
    for r in range(n + 1):
        for S in combinations(range(n), r):
            w[S] = solve_wdp(inst, S).value
    key = lambda s: tuple(sorted(s))
    for r in range(n + 1):
        for T in combinations(range(n), r):
            rest = [i for i in range(n) if i not in T]
            for rs in range(len(T) + 1):
                for S in combinations(T, rs):
                    for i in rest:
                        gain_s = w[key(S + (i,))] - w[S]
                        gain_t = w[key(T + (i,))] - w[T]
                        if gain_s < gain_t:
                            return False, (S, T, i)
    return True, None
