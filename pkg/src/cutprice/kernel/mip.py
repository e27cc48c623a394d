"""Exact branch-and-bound for mixed-integer programs over :func:`solve_lp`."""

from __future__ import annotations

from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from ..rational import Q, ZERO
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    SolveResult,
    solve_lp,
)

RowSpec = Tuple[dict, str, object]
Separator = Callable[[List["Q"]], Iterable[RowSpec]]


def _floor(v) -> int:
    return int(v.numerator) // int(v.denominator)


def _fractionality(v) -> "Q":
    f = v - _floor(v)
    return min(f, 1 - f)


def _lex_less(a: Sequence, b: Sequence, int_idx: Sequence[int]) -> bool:
    for j in int_idx:
        if a[j] != b[j]:
            return a[j] < b[j]
    return False


def solve_mip(
    lp: LinearProgram,
    separator: Optional[Separator] = None,
    first_feasible: bool = False,
    tie_break: bool = True,
    record_pool: bool = False,
    node_limit: Optional[int] = None,
) -> SolveResult:
    """Solve ``lp`` honouring integer/binary kinds.

    Depth-first branch-and-bound with most-fractional branching (lowest
    index on ties) and the floor child explored first. With ``tie_break``
    nodes whose bound equals the incumbent are still explored, and among
    equal-valued incumbents the lexicographically smaller one is kept.
    This is deterministic but not a global lexicographic optimum; callers
    needing one should encode it in the objective.

    ``separator(x)`` may return rows violated by an LP solution ``x``; they
    are added to the program globally and the node is re-solved. This is
    how lazily generated validity rows are handled.
    """
    work = lp.copy()
    int_idx = [j for j, k in enumerate(work.kinds) if k != "C"]
    minimize = work.sense == "min"
    integral_obj = all(
        (work.objective[j] == 0) or (work.kinds[j] != "C" and work.objective[j].denominator == 1)
        for j in range(work.n_vars)
    )

    def better(a, b):
        return a < b if minimize else a > b

    def bound_key(v):
        if not integral_obj:
            return v
        fl = _floor(v)
        if minimize:
            return Q(fl if fl == v else fl + 1)
        return Q(fl)

    best: Optional[SolveResult] = None
    pool: List[List["Q"]] = []
    stack = [(list(work.lb), list(work.ub))]
    nodes = 0
    while stack:
        lb, ub = stack.pop()
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            break
        work.lb, work.ub = lb, ub
        while True:
            res = solve_lp(work)
            if res.status != OPTIMAL or separator is None:
                break
            cuts = list(separator(res.x))
            if not cuts:
                break
            for coeffs, rel, rhs in cuts:
                work.add_constraint(coeffs, rel, rhs)
        if res.status == INFEASIBLE:
            continue
        if res.status == UNBOUNDED:
            if best is None and nodes == 1:
                return SolveResult(UNBOUNDED, nodes=nodes)
            continue
        bnd = bound_key(res.objective)
        if best is not None:
            if better(best.objective, bnd):
                continue
            if best.objective == bnd and not tie_break:
                continue
        frac_j = -1
        frac = ZERO
        for j in int_idx:
            f = _fractionality(res.x[j])
            if f > frac:
                frac = f
                frac_j = j
        if frac_j < 0:
            x = list(res.x)
            if (
                best is None
                or better(res.objective, best.objective)
                or (res.objective == best.objective and _lex_less(x, best.x, int_idx))
            ):
                best = SolveResult(OPTIMAL, x=x, objective=res.objective)
                if record_pool:
                    pool.append(x)
                if first_feasible:
                    break
            continue
        v = res.x[frac_j]
        fl = _floor(v)
        up_lb = list(lb)
        up_lb[frac_j] = Q(fl + 1)
        dn_ub = list(ub)
        dn_ub[frac_j] = Q(fl)
        stack.append((up_lb, list(ub)))
        stack.append((list(lb), dn_ub))
    if best is None:
        return SolveResult(INFEASIBLE, nodes=nodes)
    best.nodes = nodes
    best.pool = pool
    return best
