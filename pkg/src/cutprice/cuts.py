"""Valid-cut generation: maximally violated cuts, the AWE loop, core-point cuts."""

from __future__ import annotations

from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

from .allocations import DirectionMatrix, NewColumn, direction_matrix, separate_cut
from .dual import PreconditionError, price_vector, solve_quad_dual
from .kernel import EQ, GE, LE, LinearProgram, solve_lp
from .outcome import Cut, PriceVector
from .rational import ONE, Q, ZERO, as_q, lcm_of_denominators
from .wdp import Allocation, FractionalSolution, solve_wdp, solve_wdp_lp


class NoViolatedCut(RuntimeError):
    pass


class CutLoopError(RuntimeError):
    def __init__(self, message, trace):
        super().__init__(f"{message}; gap trace: {[str(v) for v in trace]}")
        self.trace = trace


def validity_row(D: DirectionMatrix, l: int, offset: int) -> dict:
    return {offset + k: v for k, v in enumerate(D.column(l)) if v}


def solve_lazy(lp: LinearProgram, solver: Callable, inst, D: DirectionMatrix, offset: int, alpha_of: Callable):
    """Solve with ``alpha . column >= 0`` rows for D, growing D by separation.

    ``alpha_of(x)`` extracts the alpha vector from a solution. Separation is
    skipped for exhaustive D, which already holds every maximal allocation.
    """
    added = 0
    while added < len(D):
        lp.add_constraint(validity_row(D, added, offset), GE, 0)
        added += 1
    while True:
        res = solver(lp)
        if not res.optimal or D.mode == "exhaustive":
            return res
        alpha = [max(v, ZERO) for v in alpha_of(res.x)]
        if not isinstance(separate_cut(alpha, D.xstar, inst, D), NewColumn):
            return res
        while added < len(D):
            lp.add_constraint(validity_row(D, added, offset), GE, 0)
            added += 1


def _lex_refine(lp, res, idxs, solver, lazy):
    """Lexicographically minimise the variables ``idxs`` over the optimal face."""
    x = res.x
    for j in idxs:
        lp.objective = [ZERO] * lp.n_vars
        lp.objective[j] = ONE if lp.sense == "min" else -ONE
        res = lazy(lp)
        lp.add_constraint({j: 1}, EQ, res.x[j])
        x = res.x
    return x


def find_max_violated_cut(xstar: Allocation, xf: FractionalSolution, D: DirectionMatrix, inst=None) -> Cut:
    """Unscaled cut maximising ``alpha . x^f`` with ``alpha . x* = 1`` and ``alpha D >= 0``.

    Among maximisers the deepest cut (largest coefficient sum) is preferred,
    then the lexicographically smallest.
    """
    K = len(xstar.selection)
    if xf.value <= xstar.value:
        raise PreconditionError("no integrality gap")
    lp = LinearProgram("max")
    for k in range(K):
        lp.add_var(obj=xf.x[k], lb=0, ub=K)
    lp.add_constraint({k: 1 for k in xstar.winning_bids}, EQ, 1)
    lazy = lambda prog: solve_lazy(prog, solve_lp, inst, D, 0, lambda x: x[:K])
    res = lazy(lp)
    if not res.optimal or res.objective <= 1:
        raise NoViolatedCut("maximal cut is not violated by the fractional point")
    lp.add_constraint({k: xf.x[k] for k in range(K) if xf.x[k]}, EQ, res.objective)
    lp.objective = [ONE] * K
    res = lazy(lp)
    lp.add_constraint({k: 1 for k in range(K)}, EQ, res.objective)
    lp.sense = "min"
    x = _lex_refine(lp, res, range(K), solve_lp, lazy)
    return Cut(tuple(x[:K]), ONE, "cut-frac")


def integerize_cut(cut: Cut) -> Cut:
    gamma = lcm_of_denominators(list(cut.coeffs) + [cut.rhs])
    return Cut(tuple(v * gamma for v in cut.coeffs), cut.rhs * gamma, cut.provenance)


def awe_loop(inst, max_iter: int = 100, D: Optional[DirectionMatrix] = None, xstar=None):
    """Add maximally violated integer cuts until WDP-LP is integral.

    Returns ``(cuts, prices, trace)`` with quad-dual prices over all cuts.
    """
    xstar = solve_wdp(inst) if xstar is None else xstar
    D = direction_matrix(inst, xstar) if D is None else D
    cuts: List[Cut] = []
    trace = []
    for _ in range(max_iter + 1):
        xf = solve_wdp_lp(inst, cuts=cuts)
        trace.append(xf.value)
        if len(trace) > 1 and not trace[-1] < trace[-2]:
            raise CutLoopError("fractional value failed to decrease", trace)
        if xf.value == xstar.value:
            prices = solve_quad_dual(inst, cuts, xstar)
            return cuts, prices, trace
        if len(cuts) == max_iter:
            break
        cuts.append(integerize_cut(find_max_violated_cut(xstar, xf, D, inst)))
    raise CutLoopError(f"no integral relaxation after {max_iter} cuts", trace)


def _primitive(alpha: Sequence) -> Tuple[List[int], "Q"]:
    """Write ``alpha = g * v`` with ``v`` a primitive integer vector."""
    gam = lcm_of_denominators(alpha)
    ints = [int(v * gam) for v in alpha]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints, ZERO
    return [v // g for v in ints], Q(g) / gam


def core_point_to_awe(inst, rho: Sequence, xstar: Allocation, D: Optional[DirectionMatrix] = None):
    """Natural prices plus one cut whose prices charge each winner exactly ``rho``.

    Minimises the total artificial adjustment. Items unsold at x* are priced
    at zero so the result clears the market. Returns ``(PriceVector, Cut or
    None)``; the cut is a primitive integer vector priced by the common factor.
    """
    rho = [as_q(v) for v in rho]
    D = direction_matrix(inst, xstar) if D is None else D
    J, K = inst.J, inst.K
    lp = LinearProgram("min")
    sold = [sum(inst.A[j][k] for k in xstar.winning_bids) for j in range(J)]
    for j in range(J):
        lp.add_var(lb=0, ub=0 if sold[j] < inst.c[j] else None)
    for k in range(K):
        lp.add_var(obj=1)
    win = {inst.bid_owner[k]: k for k in xstar.winning_bids}
    for k in range(K):
        row = {j: inst.A[j][k] for j in range(J) if inst.A[j][k]}
        row[J + k] = 1
        i = inst.bid_owner[k]
        if xstar.selection[k]:
            lp.add_constraint(row, EQ, rho[i])
        else:
            own = inst.b[win[i]] if i in win else ZERO
            lp.add_constraint(row, GE, inst.b[k] - own + (rho[i] if i in win else ZERO))
    res = solve_lazy(lp, solve_lp, inst, D, J, lambda x: x[J:])
    if not res.optimal:
        raise RuntimeError("core-point LP infeasible; payments are not in the core")
    p = res.x[:J]
    alpha = res.x[J:]
    vec, price = _primitive(alpha)
    if price == 0:
        return price_vector(inst, xstar, p), None
    cut = Cut(tuple(Q(v) for v in vec), sum((Q(v) for v, s in zip(vec, xstar.selection) if s), ZERO), "core-point")
    return price_vector(inst, xstar, list(p) + [price], [cut]), cut


def _times(n: int) -> str:
    return {2: "twice", 3: "three times"}.get(n, f"{n} times")


def describe_cut(cut: Cut, inst=None) -> str:
    """Plain-English reading of a cut."""
    sup = cut.support()
    if not sup:
        return "trivial cut"
    rhs = cut.rhs
    rhs_s = str(int(rhs)) if rhs.denominator == 1 else str(rhs)
    names = "{" + ",".join(str(k + 1) for k in sup) + "}"
    if all(cut.coeffs[k] == 1 for k in sup):
        return f"at most {rhs_s} of bids {names} can win"
    notes = []
    for k in sup:
        v = cut.coeffs[k]
        if v != 1:
            notes.append(f"bid {k + 1} counts {_times(int(v))}" if v.denominator == 1 else f"bid {k + 1} counts {v}")
    return f"at most {rhs_s} weighted selections among bids {names} can win ({'; '.join(notes)})"
