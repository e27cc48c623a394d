"""Exact rational linear programming (dense two-phase tableau simplex)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Union

from ..rational import Q, ZERO, ONE, as_q

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, GE, EQ = "<=", ">=", "=="
_RELS = {LE, GE, EQ, "<", ">", "="}

Coeffs = Union[Mapping[int, object], Sequence[object]]


class LPError(ValueError):
    """Raised for malformed programs (dimension or relation errors)."""


@dataclass
class Row:
    coeffs: Dict[int, "Q"]
    rel: str
    rhs: "Q"


@dataclass
class SolveResult:
    status: str
    x: List["Q"] = field(default_factory=list)
    duals: List["Q"] = field(default_factory=list)
    objective: Optional["Q"] = None
    nodes: int = 0
    pool: List[List["Q"]] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class LinearProgram:
    """A rational LP/MIP: ``sense`` objective, rows, bounds and variable kinds.

    Variables default to ``[0, +inf)`` and continuous. ``None`` bounds mean
    infinite. Kinds are ``"C"``, ``"I"`` or ``"B"`` (binary forces [0, 1]).
    """

    def __init__(self, sense: str = "min"):
        if sense not in ("min", "max"):
            raise LPError(f"unknown sense {sense!r}")
        self.sense = sense
        self.objective: List["Q"] = []
        self.lb: List[Optional["Q"]] = []
        self.ub: List[Optional["Q"]] = []
        self.kinds: List[str] = []
        self.names: List[str] = []
        self.rows: List[Row] = []

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def add_var(self, obj=0, lb=0, ub=None, kind="C", name=None) -> int:
        if kind not in ("C", "I", "B"):
            raise LPError(f"unknown variable kind {kind!r}")
        if kind == "B":
            lb, ub = 0, 1
        self.objective.append(as_q(obj))
        self.lb.append(None if lb is None else as_q(lb))
        self.ub.append(None if ub is None else as_q(ub))
        self.kinds.append(kind)
        self.names.append(name or f"x{len(self.objective) - 1}")
        return len(self.objective) - 1

    def add_vars(self, n, **kw) -> List[int]:
        return [self.add_var(**kw) for _ in range(n)]

    def add_constraint(self, coeffs: Coeffs, rel: str, rhs) -> int:
        if rel not in _RELS:
            raise LPError(f"unknown relation {rel!r}")
        rel = {"<": LE, ">": GE, "=": EQ}.get(rel, rel)
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            if len(coeffs) != self.n_vars:
                raise LPError(
                    f"dense row has {len(coeffs)} entries, program has {self.n_vars} variables"
                )
            items = enumerate(coeffs)
        row: Dict[int, "Q"] = {}
        for j, v in items:
            if not 0 <= j < self.n_vars:
                raise LPError(f"variable index {j} out of range")
            v = as_q(v)
            if v:
                row[j] = row.get(j, ZERO) + v
        self.rows.append(Row(row, rel, as_q(rhs)))
        return len(self.rows) - 1

    def copy(self) -> "LinearProgram":
        lp = LinearProgram(self.sense)
        lp.objective = list(self.objective)
        lp.lb = list(self.lb)
        lp.ub = list(self.ub)
        lp.kinds = list(self.kinds)
        lp.names = list(self.names)
        lp.rows = [Row(dict(r.coeffs), r.rel, r.rhs) for r in self.rows]
        return lp

    def is_integer_program(self) -> bool:
        return any(k != "C" for k in self.kinds)

    def residuals_ok(self, x: Sequence) -> bool:
        """Exact check that ``x`` satisfies every row and bound."""
        for j, v in enumerate(x):
            if self.lb[j] is not None and v < self.lb[j]:
                return False
            if self.ub[j] is not None and v > self.ub[j]:
                return False
        for r in self.rows:
            lhs = sum((c * x[j] for j, c in r.coeffs.items()), ZERO)
            if r.rel == LE and lhs > r.rhs:
                return False
            if r.rel == GE and lhs < r.rhs:
                return False
            if r.rel == EQ and lhs != r.rhs:
                return False
        return True

    def value(self, x: Sequence) -> "Q":
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)


# --------------------------------------------------------------------------
# standard-form tableau


class _Tableau:
    # Rows 0..m-1 are constraints, row m is the reduced-cost row; the last
    # column is the right-hand side.

    def __init__(self, rows, n_cols):
        self.T = rows
        self.m = len(rows) - 1
        self.n = n_cols
        self.basis: List[int] = []

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        prow = T[r]
        inv = ONE / prow[c]
        prow = [v * inv for v in prow]
        T[r] = prow
        nz = [(j, v) for j, v in enumerate(prow) if v]
        for i in range(len(T)):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f:
                for j, v in nz:
                    row[j] -= f * v
        self.basis[r] = c

    def run(self, allowed: Sequence[bool]) -> str:
        """Minimise the objective row; ``allowed[j]`` gates entering columns."""
        T = self.T
        m, n = self.m, self.n
        degenerate = 0
        while True:
            obj = T[m]
            bland = degenerate > 50
            enter = -1
            best = ZERO
            for j in range(n):
                if not allowed[j]:
                    continue
                d = obj[j]
                if d < 0:
                    if bland:
                        enter = j
                        break
                    if d < best:
                        best = d
                        enter = j
            if enter < 0:
                return OPTIMAL
            leave = -1
            ratio = None
            for i in range(m):
                a = T[i][enter]
                if a > 0:
                    t = T[i][n] / a
                    if (
                        ratio is None
                        or t < ratio
                        or (t == ratio and self.basis[i] < self.basis[leave])
                    ):
                        ratio = t
                        leave = i
            if leave < 0:
                return UNBOUNDED
            degenerate = degenerate + 1 if ratio == 0 else 0
            self.pivot(leave, enter)


def solve_lp(lp: LinearProgram) -> SolveResult:
    """Solve ``lp`` ignoring integrality, exactly.

    Returns an optimal basic solution with row duals ``y`` such that the
    objective equals ``y . rhs`` plus the finite-bound contributions, or an
    infeasible/unbounded status.
    """
    n = lp.n_vars
    # x_j = const_j + sum(sign * y_col)
    maps = []
    n_y = 0
    bound_rows = []
    for j in range(n):
        lo, hi = lp.lb[j], lp.ub[j]
        if lo is not None:
            maps.append((lo, [(n_y, ONE)]))
            if hi is not None:
                if hi < lo:
                    return SolveResult(INFEASIBLE)
                bound_rows.append(({n_y: ONE}, LE, hi - lo))
            n_y += 1
        elif hi is not None:
            maps.append((hi, [(n_y, -ONE)]))
            n_y += 1
        else:
            maps.append((ZERO, [(n_y, ONE), (n_y + 1, -ONE)]))
            n_y += 2

    sign = ONE if lp.sense == "min" else -ONE
    cost_y = [ZERO] * n_y
    obj_const = ZERO
    for j in range(n):
        c = lp.objective[j] * sign
        const, terms = maps[j]
        obj_const += c * const
        for col, s in terms:
            cost_y[col] += c * s

    std_rows = []
    for r in lp.rows:
        coeffs: Dict[int, "Q"] = {}
        rhs = r.rhs
        for j, a in r.coeffs.items():
            const, terms = maps[j]
            rhs -= a * const
            for col, s in terms:
                coeffs[col] = coeffs.get(col, ZERO) + a * s
        std_rows.append((coeffs, r.rel, rhs))
    n_user_rows = len(std_rows)
    std_rows.extend(bound_rows)

    m = len(std_rows)
    flips = []
    kinds = []
    for coeffs, rel, rhs in std_rows:
        flip = rhs < 0
        if flip:
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        flips.append(flip)
        kinds.append(rel)
    n_slack = sum(1 for k in kinds if k != EQ)
    n_art = sum(1 for k in kinds if k != LE)
    n_cols = n_y + n_slack + n_art
    rows = []
    init_col = [0] * m
    art_cols = []
    s_idx = n_y
    a_idx = n_y + n_slack
    for i, (coeffs, _rel, rhs) in enumerate(std_rows):
        row = [ZERO] * (n_cols + 1)
        f = -ONE if flips[i] else ONE
        for col, v in coeffs.items():
            row[col] = v * f
        row[n_cols] = rhs * f
        k = kinds[i]
        if k == LE:
            row[s_idx] = ONE
            init_col[i] = s_idx
            s_idx += 1
        else:
            if k == GE:
                row[s_idx] = -ONE
                s_idx += 1
            row[a_idx] = ONE
            init_col[i] = a_idx
            art_cols.append(a_idx)
            a_idx += 1
        rows.append(row)

    is_art = [False] * n_cols
    for c in art_cols:
        is_art[c] = True

    # phase 1
    obj = [ZERO] * (n_cols + 1)
    if art_cols:
        for i in range(m):
            if is_art[init_col[i]]:
                for j, v in enumerate(rows[i]):
                    if v:
                        obj[j] -= v
        for c in art_cols:
            obj[c] = ZERO
    rows.append(obj)
    tab = _Tableau(rows, n_cols)
    tab.basis = list(init_col)
    if art_cols:
        tab.run([True] * n_cols)
        if tab.T[m][n_cols] != 0:
            return SolveResult(INFEASIBLE)
        # drive remaining artificials out of the basis
        for i in range(m):
            if is_art[tab.basis[i]]:
                row = tab.T[i]
                for j in range(n_cols):
                    if not is_art[j] and row[j]:
                        tab.pivot(i, j)
                        break

    # phase 2
    T = tab.T
    obj = [ZERO] * (n_cols + 1)
    for j in range(n_y):
        obj[j] = cost_y[j]
    for i in range(m):
        cb = obj[tab.basis[i]]
        if cb:
            row = T[i]
            for j in range(n_cols + 1):
                if row[j]:
                    obj[j] -= cb * row[j]
    T[m] = obj
    allowed = [not a for a in is_art]
    # basic artificials stuck at zero sit on redundant rows; keep them basic
    status = tab.run(allowed)
    if status == UNBOUNDED:
        return SolveResult(UNBOUNDED)

    y_vals = [ZERO] * n_y
    for i in range(m):
        b = tab.basis[i]
        if b < n_y:
            y_vals[b] = T[i][n_cols]
    x = []
    for j in range(n):
        const, terms = maps[j]
        v = const
        for col, s in terms:
            v += s * y_vals[col]
        x.append(v)

    # y = c_B B^-1, with B^-1 read from the initial identity columns
    cb = [cost_y[b] if b < n_y else ZERO for b in tab.basis]
    duals = []
    for i in range(n_user_rows):
        col = init_col[i]
        d = ZERO
        for r in range(m):
            v = T[r][col]
            if v and cb[r]:
                d += cb[r] * v
        if flips[i]:
            d = -d
        duals.append(d * sign)
    objective = lp.value(x)
    return SolveResult(OPTIMAL, x=x, duals=duals, objective=objective)
