"""Price-match checks and minimally artificial (MAP) prices.

MAP pricing runs in two phases. ``find_alpha_bar`` finds the least total
per-bid artificial adjustment that turns item prices into a price-match
equilibrium. ``elaborate_basis`` and ``lift_noncritical`` then rewrite that
adjustment as a few integer valid cuts, each priced as an artificial item.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import count
from typing import Dict, List, Optional, Sequence, Tuple

from .allocations import (
    DirectionMatrix,
    direction_matrix,
    enumerate_feasible_allocations,
    separate_cut,
    NewColumn,
)
from .cuts import _primitive, solve_lazy, validity_row
from .dual import PreconditionError, payments_from_prices, price_vector, verify_core, verify_we
from .kernel import EQ, GE, LE, LinearProgram, solve_diagonal_qp, solve_lp, solve_mip
from .outcome import Cut, PricingOutcome
from .rational import ONE, Q, ZERO, as_q, lcm_of_denominators
from .rules import min_core_revenue
from .wdp import Allocation, allocation_from_bids, extended_column, solve_wdp

EPSILON = Q(1, 10 ** 9)
LIFT_MODES = ("minimal", "feasible", "nc-nonlinear-only")


class ElaborationError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# PME check


@dataclass
class PmeReport:
    is_pme: bool
    revenue: "Q"
    witnesses: Dict[int, Optional[Allocation]] = field(default_factory=dict)
    shortfall: Dict[int, "Q"] = field(default_factory=dict)


def _costs(inst, prices, cuts):
    prices = [as_q(v) for v in prices]
    return [sum((p * a for p, a in zip(prices, extended_column(inst, k, cuts)) if a and p), ZERO) for k in range(inst.K)]


def check_pme(inst, cuts: Sequence[Cut], xstar: Allocation, prices, method: str = "wdp", require_we: bool = True) -> PmeReport:
    """Can the seller match price revenue after removing any single winner?

    ``method="wdp"`` solves, for each winner i, a WDP over the other bidders
    with each bid replaced by its price when affordable (the K(p) test).
    ``method="enumerate"`` searches all feasible i-excluding allocations for
    an IR one with equal revenue.
    """
    all_prices = prices.all_prices if hasattr(prices, "all_prices") else list(prices)
    if require_we:
        rep = verify_we(inst, cuts, xstar, all_prices)
        if not rep.is_we:
            bits = []
            if not rep.envy_free:
                bits.append(f"envy on bids {[k + 1 for k in rep.envy_violations]}")
            if not rep.market_cleared:
                bits.append(f"priced but unsold {rep.unsold_priced}")
            if not rep.efficient:
                bits.append("allocation not efficient")
            raise PreconditionError("not a Walrasian equilibrium: " + "; ".join(bits))
    cost = _costs(inst, all_prices, cuts)
    R = sum((cost[k] for k in xstar.winning_bids), ZERO)
    truncated = [cost[k] if cost[k] <= inst.b[k] else ZERO for k in range(inst.K)]
    report = PmeReport(True, R)
    feasible = enumerate_feasible_allocations(inst) if method == "enumerate" else None
    for i in sorted(xstar.winners):
        if method == "enumerate":
            witness = None
            best = ZERO
            for a in feasible:
                if i in a.winners or any(cost[k] > inst.b[k] for k in a.winning_bids):
                    continue
                rev = sum((cost[k] for k in a.winning_bids), ZERO)
                if rev > best:
                    best = rev
                if rev == R and witness is None:
                    witness = a
        else:
            others = [h for h in range(inst.I) if h != i]
            a = solve_wdp(inst, others, amounts=truncated)
            best = sum((cost[k] for k in a.winning_bids), ZERO)
            witness = a if best == R else None
        report.witnesses[i] = witness
        if witness is None:
            report.is_pme = False
            report.shortfall[i] = R - best
    return report


# --------------------------------------------------------------------------
# Find alpha-bar: scenario branch-and-bound


@dataclass
class AlphaBar:
    alpha: Tuple["Q", ...]
    prices: Tuple["Q", ...]
    witnesses: Dict[int, Allocation]
    revenue: "Q"
    nodes: int = 0


class _AlphaProblem:
    """Shared data for the Find-alpha-bar search over (p, alpha)."""

    def __init__(self, inst, xstar, D):
        self.inst, self.xstar, self.D = inst, xstar, D
        self.J, self.K = inst.J, inst.K
        self.win = {inst.bid_owner[k]: k for k in xstar.winning_bids}
        sold = [sum(inst.A[j][k] for k in xstar.winning_bids) for j in range(inst.J)]
        self.unsold = [sold[j] < inst.c[j] for j in range(inst.J)]
        self.lower = min_core_revenue(inst, xstar)
        self._cands: Dict[int, List[Allocation]] = {}
        self._feasible = None

    def base(self, sense="min") -> LinearProgram:
        inst, J, K = self.inst, self.J, self.K
        lp = LinearProgram(sense)
        for j in range(J):
            lp.add_var(lb=0, ub=0 if self.unsold[j] else None)
        for k in range(K):
            lp.add_var(lb=0)
        for k in range(K):
            i = inst.bid_owner[k]
            if i in self.win:
                w = self.win[i]
                if k == w:
                    continue
                row = {j: inst.A[j][k] - inst.A[j][w] for j in range(J) if inst.A[j][k] != inst.A[j][w]}
                row[J + k] = ONE
                row[J + w] = -ONE
                lp.add_constraint(row, GE, inst.b[k] - inst.b[w])
            else:
                row = {j: inst.A[j][k] for j in range(J) if inst.A[j][k]}
                row[J + k] = ONE
                lp.add_constraint(row, GE, inst.b[k])
        for i, w in self.win.items():
            row = {j: inst.A[j][w] for j in range(J) if inst.A[j][w]}
            row[J + w] = ONE
            lp.add_constraint(row, LE, inst.b[w])
        return lp

    def add_scenario(self, lp, S: Allocation):
        inst, J = self.inst, self.J
        for j in range(J):
            if not self.unsold[j] and sum(inst.A[j][k] for k in S.winning_bids) < inst.c[j]:
                lp.add_constraint({j: 1}, EQ, 0)
        row = {}
        for k in S.winning_bids:
            row[J + k] = row.get(J + k, ZERO) + 1
        for k in self.xstar.winning_bids:
            row[J + k] = row.get(J + k, ZERO) - 1
        row = {c: v for c, v in row.items() if v}
        if row:
            lp.add_constraint(row, EQ, 0)
        for k in S.winning_bids:
            r = {j: inst.A[j][k] for j in range(J) if inst.A[j][k]}
            r[J + k] = ONE
            lp.add_constraint(r, LE, inst.b[k])

    def candidates(self, i) -> List[Allocation]:
        if i not in self._cands:
            if self._feasible is None:
                self._feasible = enumerate_feasible_allocations(self.inst)
            self._cands[i] = [a for a in self._feasible if i not in a.winners and a.value >= self.lower and a.winning_bids]
        return self._cands[i]

    def split(self, x):
        return list(x[: self.J]), list(x[self.J: self.J + self.K])

    def unsatisfied(self, x, assigned) -> Tuple[Optional[int], Dict[int, Allocation]]:
        """First winner lacking a revenue-matching scenario at ``x``, plus witnesses."""
        inst = self.inst
        p, al = self.split(x)
        cost = [sum((p[j] * inst.A[j][k] for j in range(self.J) if inst.A[j][k]), ZERO) + al[k] for k in range(self.K)]
        R = sum((cost[k] for k in self.xstar.winning_bids), ZERO)
        trunc = [cost[k] if cost[k] <= inst.b[k] else ZERO for k in range(self.K)]
        wit = {}
        for i in sorted(self.win):
            if i in assigned:
                wit[i] = assigned[i]
                continue
            others = [h for h in range(inst.I) if h != i]
            a = solve_wdp(inst, others, amounts=trunc)
            if sum((cost[k] for k in a.winning_bids), ZERO) != R:
                return i, wit
            wit[i] = a
        return None, wit


def _branch_and_bound(prob: _AlphaProblem, build, solve):
    """Best-first search over scenario assignments.

    ``build()`` returns a fresh base program (stage locks included) and
    ``solve(lp)`` its relaxation. Returns the best ``(objective, x, witnesses)``.
    """
    tick = count()
    nodes = 0

    def evaluate(assigned):
        nonlocal nodes
        nodes += 1
        lp = build()
        for S in assigned.values():
            prob.add_scenario(lp, S)
        res = solve_lazy(lp, solve, prob.inst, prob.D, prob.J, lambda x: x[prob.J: prob.J + prob.K])
        return res if res.optimal else None

    root = evaluate({})
    if root is None:
        raise RuntimeError("Find-alpha-bar relaxation infeasible")
    heap = [(root.objective, next(tick), {}, root)]
    best = None
    while heap:
        bound, _, assigned, res = heapq.heappop(heap)
        if best is not None and bound >= best[0]:
            break
        i, wit = prob.unsatisfied(res.x, assigned)
        if i is None:
            best = (res.objective, res.x, wit)
            continue
        for S in prob.candidates(i):
            child = dict(assigned)
            child[i] = S
            r = evaluate(child)
            if r is None or (best is not None and r.objective >= best[0]):
                continue
            heapq.heappush(heap, (r.objective, next(tick), child, r))
    if best is None:
        raise RuntimeError("no price-match scenario assignment found")
    return best, nodes


def find_alpha_bar(inst, xstar: Optional[Allocation] = None, D: Optional[DirectionMatrix] = None) -> AlphaBar:
    """Least total artificial adjustment giving a price-match equilibrium.

    The search branches on which allocation matches revenue when each winner
    is removed. Ties are broken by least revenue, then least
    ``sum c_j p_j^2 + sum alpha_k^2``.
    """
    xstar = solve_wdp(inst) if xstar is None else xstar
    D = direction_matrix(inst, xstar) if D is None else D
    prob = _AlphaProblem(inst, xstar, D)
    J, K = prob.J, prob.K
    if not prob.win:
        return AlphaBar(tuple([ZERO] * K), tuple([ZERO] * J), {}, ZERO)
    alpha_sum = {J + k: ONE for k in range(K)}
    revenue = {}
    for k in xstar.winning_bids:
        for j in range(J):
            if inst.A[j][k]:
                revenue[j] = revenue.get(j, ZERO) + inst.A[j][k]
        revenue[J + k] = revenue.get(J + k, ZERO) + 1

    def stage(locks, objective):
        def build():
            lp = prob.base()
            for row, v in locks:
                lp.add_constraint(row, EQ, v)
            for c, v in objective.items():
                lp.objective[c] = v
            return lp
        return build

    total_nodes = 0
    (v1, _, _), n = _branch_and_bound(prob, stage([], alpha_sum), solve_lp)
    total_nodes += n
    (v2, _, _), n = _branch_and_bound(prob, stage([(alpha_sum, v1)], revenue), solve_lp)
    total_nodes += n
    weights = [as_q(c) for c in inst.c] + [ONE] * K
    qp = lambda lp: solve_diagonal_qp(lp, weights)
    (_, x, wit), n = _branch_and_bound(prob, stage([(alpha_sum, v1), (revenue, v2)], {}), qp)
    total_nodes += n
    p, al = prob.split(x)
    return AlphaBar(tuple(al), tuple(p), wit, v2, total_nodes)


def alpha_bar_mip(inst, xstar: Allocation, D: DirectionMatrix, big_m=None) -> Tuple[LinearProgram, dict]:
    """Linear big-M mixed-integer form of Find-alpha-bar (cross-check oracle).

    Variables: p (J), alpha (K), z (J binary), then per winner i the
    scenario selection x^{-i} and linearised products xi^{-i}. Returns the
    program and an index map.
    """
    J, K = inst.J, inst.K
    M = as_q(1 + sum(inst.b, ZERO)) if big_m is None else as_q(big_m)
    win = {inst.bid_owner[k]: k for k in xstar.winning_bids}
    sold = [sum(inst.A[j][k] for k in xstar.winning_bids) for j in range(J)]
    lp = LinearProgram("min")
    P = [lp.add_var(lb=0, ub=0 if sold[j] < inst.c[j] else None) for j in range(J)]
    AL = [lp.add_var(obj=1, lb=0) for k in range(K)]
    Z = [lp.add_var(kind="B") for j in range(J)]
    X, XI = {}, {}
    for i in sorted(win):
        X[i] = {k: lp.add_var(kind="B") for k in range(K) if inst.bid_owner[k] != i}
        XI[i] = {k: lp.add_var(lb=0) for k in X[i]}
    for l in range(len(D)):
        lp.add_constraint({AL[k]: v for k, v in enumerate(D.column(l)) if v}, GE, 0)
    for k in range(K):
        i = inst.bid_owner[k]
        w = win.get(i)
        row = {}
        for j in range(J):
            v = inst.A[j][k] - (inst.A[j][w] if w is not None else 0)
            if v:
                row[P[j]] = v
        row[AL[k]] = row.get(AL[k], ZERO) + 1
        if w is not None:
            row[AL[w]] = row.get(AL[w], ZERO) - 1
        row = {c: v for c, v in row.items() if v}
        rhs = inst.b[k] - (inst.b[w] if w is not None else ZERO)
        if row:
            lp.add_constraint(row, GE, rhs)
    for i, w in win.items():  # winners stay individually rational
        row = {P[j]: inst.A[j][w] for j in range(J) if inst.A[j][w]}
        row[AL[w]] = 1
        lp.add_constraint(row, LE, inst.b[w])
    for j in range(J):
        lp.add_constraint({P[j]: 1, Z[j]: -M}, LE, 0)
    for i in sorted(win):
        xs, xi = X[i], XI[i]
        for j in range(J):
            row = {xs[k]: inst.A[j][k] for k in xs if inst.A[j][k]}
            lp.add_constraint(row, LE, inst.c[j])
            row = dict(row)
            row[Z[j]] = -inst.c[j]
            lp.add_constraint(row, GE, 0)
        for h in range(inst.I):
            if h != i:
                lp.add_constraint({xs[k]: 1 for k in inst.bidder_bids[h]}, LE, 1)
        row = {xi[k]: 1 for k in xs}
        for k in xstar.winning_bids:
            row[AL[k]] = row.get(AL[k], ZERO) - 1
        lp.add_constraint(row, EQ, 0)
        for k in xs:
            lp.add_constraint({xi[k]: 1, xs[k]: -M}, LE, 0)
            lp.add_constraint({xi[k]: 1, AL[k]: -1}, LE, 0)
            lp.add_constraint({xi[k]: 1, AL[k]: -1, xs[k]: -M}, GE, -M)
            row = {P[j]: inst.A[j][k] for j in range(J) if inst.A[j][k]}
            row[AL[k]] = 1
            row[xs[k]] = M
            lp.add_constraint(row, LE, inst.b[k] + M)
    return lp, {"p": P, "alpha": AL, "z": Z, "x": X, "xi": XI}


# --------------------------------------------------------------------------
# D-bar


@dataclass
class TightScenarioMatrix:
    columns: List[List[int]]
    scenarios: List[Allocation]
    critical: List[int]
    noncritical: List[int]

    def rows(self, K) -> List[List[int]]:
        return [[col[k] for col in self.columns] for k in range(K)]


def build_dbar(alpha: Sequence, D: DirectionMatrix, xstar: Allocation) -> TightScenarioMatrix:
    """Signed incidence of the tight, non-trivial columns of D."""
    alpha = [as_q(a) for a in alpha]
    K = len(alpha)
    cols, scen = [], []
    if any(alpha):
        for l, a in enumerate(D.allocations):
            if a.mask == xstar.mask:
                continue
            col = D.column(l)
            if sum((alpha[k] * col[k] for k in range(K) if col[k]), ZERO) != 0:
                continue
            entry = [0] * K
            for k in range(K):
                if alpha[k] > 0:
                    if xstar.selection[k] == 1 and a.selection[k] == 0:
                        entry[k] = 1
                    elif xstar.selection[k] == 0 and a.selection[k] == 1:
                        entry[k] = -1
            if any(entry):
                cols.append(entry)
                scen.append(a)
    crit = [k for k in range(K) if any(c[k] for c in cols)]
    nc = [k for k in range(K) if alpha[k] > 0 and k not in crit]
    return TightScenarioMatrix(cols, scen, crit, nc)


def _rank(rows: List[List]) -> int:
    M = [[as_q(v) for v in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c]:
                f = M[r][c] / M[rank][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def kernel_nullity(dbar: TightScenarioMatrix) -> int:
    """Dimension of ``{alpha on critical bids : alpha D-bar = 0}``."""
    crit = dbar.critical
    if not crit:
        return 0
    rows = [[col[k] for col in dbar.columns] for k in crit]
    return len(crit) - _rank(rows)


# --------------------------------------------------------------------------
# elaboration


@dataclass
class Elaboration:
    cuts: List[List[int]]
    prices: List["Q"]
    remainders: List[List["Q"]] = field(default_factory=list)
    nc_lump_sums: Dict[int, "Q"] = field(default_factory=dict)


def price_cuts(cuts: Sequence[Sequence], alpha: Sequence, coords: Optional[Sequence[int]] = None):
    """Least total remainder ``r`` with ``sum_j p_j cut_j + r = alpha`` on ``coords``."""
    prices, r, _ = _price_cuts(cuts, alpha, coords)
    return prices, r


def _price_cuts(cuts, alpha, coords):
    alpha = [as_q(a) for a in alpha]
    coords = list(range(len(alpha))) if coords is None else list(coords)
    lp = LinearProgram("min")
    T = len(cuts)
    for _ in range(T):
        lp.add_var(lb=0)
    for _ in coords:
        lp.add_var(obj=1, lb=0)
    for n, k in enumerate(coords):
        row = {j: cuts[j][k] for j in range(T) if cuts[j][k]}
        row[T + n] = 1
        lp.add_constraint(row, EQ, alpha[k])
    res = solve_lp(lp)
    r = [ZERO] * len(alpha)
    y = [ZERO] * len(alpha)
    for n, k in enumerate(coords):
        r[k] = res.x[T + n]
        y[k] = res.duals[n]
    return list(res.x[:T]), r, y


def _kernel_mip(inst, D, dbar, xstar, K, extra=None):
    """Integer cut program over critical coordinates (objective: coefficient sum)."""
    lp = LinearProgram("min")
    crit = set(dbar.critical)
    for k in range(K):
        lp.add_var(obj=1 if k in crit else 0, lb=0, ub=None if k in crit else 0, kind="I")
    for col in dbar.columns:
        row = {k: col[k] for k in range(K) if col[k]}
        if row:
            lp.add_constraint(row, EQ, 0)
    if extra:
        extra(lp)
    return lp


def _solve_cut_mip(lp, inst, D, K, first_feasible=False):
    """MIP over cut coefficients with validity rows from D (lazy when dynamic)."""
    for l in range(len(D)):
        row = validity_row(D, l, 0)
        if row:
            lp.add_constraint(row, GE, 0)
    added = len(D)

    def sep(x):
        if D.mode == "exhaustive":
            return []
        nonlocal added
        alpha = [max(v, ZERO) for v in x[:K]]
        if any(v.denominator != 1 for v in alpha):
            return []
        out = []
        if isinstance(separate_cut(alpha, D.xstar, inst, D), NewColumn):
            while added < len(D):
                row = validity_row(D, added, 0)
                if row:
                    out.append((row, GE, 0))
                added += 1
        return out

    return solve_mip(lp, separator=sep, first_feasible=first_feasible)


def _lex_largest(lp, res, K, inst, D):
    """Among optimal integer cuts, take the lexicographically largest."""
    total = sum(res.x[:K], ZERO)
    if total == 0:
        return res
    base = int(total) + 1
    lp.add_constraint({k: 1 for k in range(K)}, EQ, total)
    lp.objective = [ZERO] * lp.n_vars
    for k in range(K):
        lp.objective[k] = -Q(base) ** (K - 1 - k)
    return _solve_cut_mip(lp, inst, D, K)


def elaborate_basis(dbar: TightScenarioMatrix, D: DirectionMatrix, alpha: Sequence, inst=None, epsilon=EPSILON) -> Elaboration:
    """Decompose alpha on critical bids into priced integer kernel cuts."""
    alpha = [as_q(a) for a in alpha]
    K = len(alpha)
    if not any(alpha):
        raise ElaborationError("alpha-bar is zero; nothing to elaborate")
    inst = inst if inst is not None else None
    crit = dbar.critical
    limit = kernel_nullity(dbar)
    cuts: List[List[int]] = []
    trace: List[List["Q"]] = []

    def first(lp):
        lp.add_constraint({k: 1 for k in crit}, GE, 1)

    lp = _kernel_mip(inst, D, dbar, D.xstar, K, first)
    res = _solve_cut_mip(lp, inst, D, K)
    if not res.optimal:
        raise ElaborationError("no integer kernel cut exists")
    res = _lex_largest(lp, res, K, inst, D)
    cuts.append([int(v) for v in res.x[:K]])
    prices, r = price_cuts(cuts, alpha, crit)
    trace.append(r)
    while any(r[k] for k in crit):
        if len(cuts) >= limit:
            break
        kt = min(k for k in crit if r[k] > 0)
        T = len(cuts)

        def cond(lp, T=T, r=r, kt=kt):
            g0 = lp.n_vars
            for _ in range(T):
                lp.add_var(lb=None)  # gamma
            d0 = lp.n_vars
            for k in range(K):
                lp.add_var(lb=0)  # delta
            for k in range(K):
                row = {k: 1, d0 + k: -1}
                for j in range(T):
                    if cuts[j][k]:
                        row[g0 + j] = cuts[j][k]
                lp.add_constraint(row, EQ, 0)
            for k in crit:
                if r[k] == 0:
                    lp.add_constraint({d0 + k: 1}, EQ, 0)
            lp.add_constraint({d0 + kt: 1}, GE, epsilon)

        lp = _kernel_mip(inst, D, dbar, D.xstar, K, cond)
        res = _solve_cut_mip(lp, inst, D, K)
        if not res.optimal:
            break
        res = _lex_largest(lp, res, K, inst, D)
        cuts.append([int(v) for v in res.x[:K]])
        prices, r = price_cuts(cuts, alpha, crit)
        trace.append(r)
    if any(r[k] for k in crit):
        # the greedy cuts need not span a cone containing alpha; finish by
        # column generation, which always has alpha itself available
        prices, r = _complete_by_pricing(cuts, trace, alpha, dbar, D, inst)
    keep = [j for j, p in enumerate(prices) if p > 0]
    return Elaboration([cuts[j] for j in keep], [prices[j] for j in keep], trace)


def _complete_by_pricing(cuts, trace, alpha, dbar, D, inst, max_rounds=200):
    K = len(alpha)
    crit = dbar.critical
    scaled, _ = _primitive([alpha[k] if k in crit else ZERO for k in range(K)])
    cap = max(scaled)
    for _ in range(max_rounds):
        prices, r, y = _price_cuts(cuts, alpha, crit)
        if not any(r[k] for k in crit):
            return prices, r

        # smallest cut with positive reduced cost; y.alpha moves in steps of 1/L
        step = Q(1, lcm_of_denominators([y[k] for k in crit]))

        def improving(lp):
            for k in crit:
                lp.ub[k] = Q(cap)
            lp.add_constraint({k: y[k] for k in crit if y[k]}, GE, step)

        lp = _kernel_mip(inst, D, dbar, D.xstar, K, improving)
        res = _solve_cut_mip(lp, inst, D, K)
        if not res.optimal:
            raise ElaborationError("no valid kernel cut reduces the remainder")
        res = _lex_largest(lp, res, K, inst, D)
        cuts.append([int(v) for v in res.x[:K]])
        trace.append(r)
    raise ElaborationError(f"remainder nonzero after {max_rounds} pricing rounds")


def lift_noncritical(elab: Elaboration, noncritical: Sequence[int], D: DirectionMatrix, alpha: Sequence, inst=None, mode: str = "minimal") -> Elaboration:
    """Give non-critical bids integer coefficients so cut prices cover alpha-bar."""
    if mode not in LIFT_MODES:
        raise ValueError(f"unknown lift mode {mode!r}")
    alpha = [as_q(a) for a in alpha]
    nc = list(noncritical)
    if not nc:
        return elab
    if mode == "nc-nonlinear-only":
        return Elaboration([list(c) for c in elab.cuts], list(elab.prices), elab.remainders, {k: alpha[k] for k in nc})
    T = len(elab.cuts)
    xs = D.xstar.selection
    lp = LinearProgram("min")
    var = {}
    for j in range(T):
        for k in nc:
            var[j, k] = lp.add_var(obj=1, lb=0, kind="I")
    for k in nc:
        lp.add_constraint({var[j, k]: elab.prices[j] for j in range(T)}, GE, alpha[k])
    added = 0

    def add_cols():
        nonlocal added
        while added < len(D):
            a = D.allocations[added].selection
            added += 1
            if not any(a[k] for k in nc):
                continue
            for j in range(T):
                cut = elab.cuts[j]
                fixed = sum(cut[k] * (xs[k] - a[k]) for k in range(len(xs)) if k not in nc)
                lp.add_constraint({var[j, k]: 1 for k in nc if a[k]}, LE, fixed)

    add_cols()

    def sep(x):
        if D.mode == "exhaustive":
            return []
        before = len(lp.rows)
        for j in range(T):
            full = list(elab.cuts[j])
            for k in nc:
                full[k] = x[var[j, k]]
            if any(v.denominator != 1 for v in map(as_q, full)):
                return []
            separate_cut(full, D.xstar, inst, D)
        add_cols()
        new = lp.rows[before:]
        del lp.rows[before:]
        return [(r.coeffs, r.rel, r.rhs) for r in new]

    res = solve_mip(lp, separator=sep, first_feasible=(mode == "feasible"))
    if not res.optimal:
        raise ElaborationError("non-critical lifting infeasible")
    cuts = [list(c) for c in elab.cuts]
    for (j, k), v in var.items():
        cuts[j][k] = int(res.x[v])
    return Elaboration(cuts, list(elab.prices), elab.remainders)


def raise_noncritical(alpha: Sequence, noncritical: Sequence[int], D: DirectionMatrix) -> List["Q"]:
    """Raise each non-critical adjustment to the most validity allows.

    The binding column then contains the bid, so it becomes critical.
    Winners and critical bids keep their amounts, and the raised bid's
    quoted payment only grows, so envy-freeness is kept.
    """
    alpha = [as_q(a) for a in alpha]
    K = len(alpha)
    for k in noncritical:
        cap = None
        for l, a in enumerate(D.allocations):
            if not a.selection[k]:
                continue
            col = D.column(l)
            rest = sum((alpha[m] * col[m] for m in range(K) if m != k and col[m]), ZERO)
            cap = rest if cap is None or rest < cap else cap
        if cap is not None and cap > alpha[k]:
            alpha[k] = cap
    return alpha


# --------------------------------------------------------------------------
# enumeration heuristic


def _dominates(a, b):
    return all(x <= y for x, y in zip(a, b))


def enumerate_kernel_cuts(dbar: TightScenarioMatrix, D: DirectionMatrix, xstar: Allocation, nullity: Optional[int] = None, max_total: Optional[int] = None, node_budget: int = 200000) -> List[List[int]]:
    """Depth-first search for integer kernel cuts, grown one unit at a time.

    From a winner's unit vector, repeatedly add the critical coordinate that
    brings ``alpha D-bar`` closest to zero (ties: the smallest current
    coefficient, then the lowest index). Kernel vectors that are valid cuts,
    linearly independent of those already kept, are kept until ``nullity``
    are found. A vector lying above a kept cut is first reduced by it. If
    the greedy rule is exhausted first, the search is repeated without the
    smallest-coefficient tie-break, then over all moves in score order.
    """
    K = len(xstar.selection)
    nullity = kernel_nullity(dbar) if nullity is None else nullity
    if nullity == 0:
        return []
    crit = dbar.critical
    cols = dbar.columns
    Dcols = D.columns
    max_total = max_total if max_total is not None else 4 * len(crit) * (nullity + 1)
    keep: List[Tuple[int, ...]] = []
    out = set()
    seen = set()

    def image(a):
        return [sum(a[k] * c[k] for k in crit if c[k]) for c in cols]

    def leaf(a):
        t = tuple(a)
        if t in out or t in keep:
            return
        out.add(t)
        # strip kept cuts lying below this vector; the rest stays in the kernel
        v = list(a)
        reduced = True
        while reduced:
            reduced = False
            for kp in keep:
                if _dominates(kp, v):
                    v = [x - y for x, y in zip(v, kp)]
                    reduced = True
        t = tuple(v)
        if not any(t) or t in keep:
            return
        if not all(sum(t[k] * col[k] for k in range(K) if col[k]) >= 0 for col in Dcols):
            return
        if _rank([list(u) for u in keep] + [list(t)]) <= len(keep):
            return
        keep.append(t)

    budget = [node_budget]

    def explore(a, level):
        if len(keep) >= nullity or budget[0] <= 0:
            return
        t = tuple(a)
        # a node is worth revisiting once keep/out change its candidate set
        key = (t, len(keep), len(out), level)
        if key in seen or sum(a) > max_total:
            return
        seen.add(key)
        budget[0] -= 1
        img = image(a)
        if not any(img):
            leaf(a)
            return
        scores = []
        for k in crit:
            b = list(a)
            b[k] += 1
            if tuple(b) in keep or tuple(b) in out:
                continue
            scores.append((sum(abs(v) for v in image(b)), a[k], k))
        if not scores:
            return
        scores.sort()
        if level < 2:
            scores = [s for s in scores if s[0] == scores[0][0]]
        if level < 1:
            scores = [s for s in scores if s[1] == scores[0][1]]
        for _, _, k in scores:
            b = list(a)
            b[k] += 1
            explore(b, level)
            if len(keep) >= nullity:
                return

    # level 0 follows the greedy rule exactly; wider levels run only if it
    # is exhausted before enough cuts are found
    for level in range(3):
        for k0 in [k for k in crit if xstar.selection[k]]:
            a = [0] * K
            a[k0] = 1
            explore(a, level)
            if len(keep) >= nullity:
                break
        if len(keep) >= nullity:
            break
    if len(keep) < nullity:
        raise ElaborationError(f"enumeration found {len(keep)} of {nullity} cuts")
    return [list(v) for v in keep]


# --------------------------------------------------------------------------
# full MAP pipeline


def map_prices(inst, lift_mode: str = "minimal", xstar: Optional[Allocation] = None, D: Optional[DirectionMatrix] = None) -> PricingOutcome:
    xstar = solve_wdp(inst) if xstar is None else xstar
    D = direction_matrix(inst, xstar) if D is None else D
    ab = find_alpha_bar(inst, xstar, D)
    extra = {"alpha_bar": list(ab.alpha), "critical": [], "noncritical": [], "remainders": [], "search_nodes": ab.nodes}
    cuts: List[Cut] = []
    art: List["Q"] = []
    if any(ab.alpha):
        dbar = build_dbar(ab.alpha, D, xstar)
        elab = elaborate_basis(dbar, D, ab.alpha, inst)
        try:
            elab = lift_noncritical(elab, dbar.noncritical, D, ab.alpha, inst, lift_mode)
        except ElaborationError:
            # the kernel basis admits no valid lift: promote non-critical
            # bids to critical and elaborate again
            raised = raise_noncritical(ab.alpha, dbar.noncritical, D)
            extra["raised_alpha"] = raised
            dbar = build_dbar(raised, D, xstar)
            elab = elaborate_basis(dbar, D, raised, inst)
        for vec, price in zip(elab.cuts, elab.prices):
            cut = Cut.make(vec, sum(v for v, s in zip(vec, xstar.selection) if s), "map")
            cuts.append(cut)
            art.append(price)
        extra.update(critical=dbar.critical, noncritical=dbar.noncritical, remainders=elab.remainders,
                     nullity=kernel_nullity(dbar), nc_lump_sums=elab.nc_lump_sums)
    prices = list(ab.prices) + art
    pv = price_vector(inst, xstar, prices, cuts)
    out = PricingOutcome("map", xstar, pv.payments, pv, cuts, extra=extra)
    we = verify_we(inst, cuts, xstar, prices)
    out.certificates["we"] = we.is_we
    out.certificates["core"] = verify_core(inst, xstar, pv.payments).is_core
    out.certificates["pme"] = check_pme(inst, cuts, xstar, prices, require_we=False).is_pme if we.is_we else False
    return out
