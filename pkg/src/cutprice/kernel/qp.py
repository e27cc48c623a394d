"""Exact minimisation of separable convex quadratics over rational polyhedra.

Strictly convex objectives use a dual active-set method in the style of
Goldfarb and Idnani, solving each small KKT system exactly. Objectives with
zero weights fall back to Lemke's complementary pivoting on the KKT LCP.
"""

from __future__ import annotations

from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from ..rational import Q, ZERO, ONE, as_q
from .lp import EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, LinearProgram, SolveResult

Separator = Callable[[List["Q"]], Iterable[Tuple[dict, str, object]]]


def _solve_dense(M: List[List["Q"]], rhs: List["Q"]) -> List["Q"]:
    n = len(M)
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular KKT block")
        A[col], A[piv] = A[piv], A[col]
        inv = ONE / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def _rows_of(lp: LinearProgram):
    """Dense ``(normal, rhs, is_eq)`` rows with ``normal . x >= rhs`` / ``==``."""
    n = lp.n_vars
    out = []
    for r in lp.rows:
        vec = [ZERO] * n
        for j, v in r.coeffs.items():
            vec[j] = v
        if r.rel == LE:
            out.append(([-v for v in vec], -r.rhs, False))
        elif r.rel == GE:
            out.append((vec, r.rhs, False))
        else:
            out.append((vec, r.rhs, True))
    for j in range(n):
        if lp.lb[j] is not None:
            vec = [ZERO] * n
            vec[j] = ONE
            out.append((vec, lp.lb[j], False))
        if lp.ub[j] is not None:
            vec = [ZERO] * n
            vec[j] = -ONE
            out.append((vec, -lp.ub[j], False))
    return out


def _dot(a, b):
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def _goldfarb_idnani(G: List["Q"], g: List["Q"], rows) -> Tuple[str, List["Q"], dict]:
    n = len(G)
    Ginv = [ONE / w for w in G]
    x = [-gi * hi for gi, hi in zip(g, Ginv)]
    active: List[int] = []
    normals = {}
    rhs = {}
    u: dict = {}
    eq_pending = [i for i, r in enumerate(rows) if r[2]]
    skipped_eq = set()

    def directions(nplus):
        if active:
            N = [normals[a] for a in active]
            GN = [[Ginv[j] * v for j, v in enumerate(col)] for col in N]
            M = [[_dot(GN[a], N[b]) for b in range(len(N))] for a in range(len(N))]
            r = _solve_dense(M, [_dot(GN[a], nplus) for a in range(len(N))])
        else:
            N, GN, r = [], [], []
        z = [Ginv[j] * nplus[j] for j in range(n)]
        for a, ra in enumerate(r):
            if ra:
                col = GN[a]
                for j in range(n):
                    if col[j]:
                        z[j] -= ra * col[j]
        return z, r

    while True:
        p = None
        while eq_pending:
            i = eq_pending.pop(0)
            vec, b, _ = rows[i]
            s = _dot(vec, x) - b
            if s > 0:
                vec, b = [-v for v in vec], -b
                s = -s
            p, nplus, bplus, is_eq = i, vec, b, True
            break
        if p is None:
            worst = ZERO
            for i, (vec, b, eq) in enumerate(rows):
                if eq or i in normals:
                    continue
                s = _dot(vec, x) - b
                if s < worst:
                    worst = s
                    p, nplus, bplus, is_eq = i, vec, b, False
            if p is None:
                return OPTIMAL, x, u
        up = ZERO
        while True:
            s_p = _dot(nplus, x) - bplus
            z, r = directions(nplus)
            t1 = None
            k_drop = None
            for a, ra in zip(active, r):
                if ra > 0 and not rows[a][2]:
                    t = u[a] / ra
                    if t1 is None or t < t1:
                        t1, k_drop = t, a
            znz = any(z)
            if znz:
                t2 = -s_p / _dot(z, nplus)
            else:
                t2 = None
                if is_eq and s_p == 0:
                    skipped_eq.add(p)
                    break
            if t1 is None and t2 is None:
                return INFEASIBLE, x, u
            if t2 is None or (t1 is not None and t1 < t2):
                t = t1
            else:
                t = t2
            if znz:
                x = [xi + t * zi for xi, zi in zip(x, z)]
            for a, ra in zip(active, r):
                u[a] -= t * ra
            up += t
            if t2 is not None and t == t2:
                active.append(p)
                normals[p] = nplus
                rhs[p] = bplus
                u[p] = up
                break
            active.remove(k_drop)
            del normals[k_drop]
            del rhs[k_drop]
            del u[k_drop]


def _lemke(M: List[List["Q"]], q: List["Q"]) -> Optional[List["Q"]]:
    """Lexicographic Lemke; returns ``z`` solving the LCP or ``None`` on a ray."""
    n = len(q)
    if all(v >= 0 for v in q):
        return [ZERO] * n
    # columns: w (0..n-1), z (n..2n-1), z0 (2n), rhs (2n+1)
    T = []
    for i in range(n):
        row = [ZERO] * (2 * n + 2)
        row[i] = ONE
        for j in range(n):
            row[n + j] = -M[i][j]
        row[2 * n] = -ONE
        row[2 * n + 1] = q[i]
        T.append(row)
    basis = list(range(n))

    def pivot(r, c):
        inv = ONE / T[r][c]
        T[r] = [v * inv for v in T[r]]
        for i in range(n):
            if i != r and T[i][c]:
                f = T[i][c]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = c

    def lex_ratio_row(c, rows):
        # lexicographic minimum of (rhs, B^-1 columns) / pivot over candidate rows
        best = None
        best_key = None
        for i in rows:
            a = T[i][c]
            key = [T[i][2 * n + 1] / a] + [T[i][j] / a for j in range(n)]
            if best_key is None or key < best_key:
                best_key, best = key, i
        return best

    r = min(range(n), key=lambda i: (q[i], i))
    pivot(r, 2 * n)
    entering = r  # complement of the leaving w_r is z_r
    entering = n + r
    for _ in range(50 * (n + 1) ** 2):
        rows = [i for i in range(n) if T[i][entering] > 0]
        if not rows:
            return None
        r = lex_ratio_row(entering, rows)
        leaving = basis[r]
        pivot(r, entering)
        if leaving == 2 * n:
            z = [ZERO] * n
            for i, b in enumerate(basis):
                if n <= b < 2 * n:
                    z[b - n] = T[i][2 * n + 1]
            return z
        entering = leaving + n if leaving < n else leaving - n
    raise RuntimeError("Lemke iteration limit reached")


def _lemke_qp(lp: LinearProgram, weights: Sequence["Q"]) -> Tuple[str, List["Q"]]:
    n = lp.n_vars
    # shift to y >= 0
    maps = []
    ny = 0
    extra = []
    for j in range(n):
        lo, hi = lp.lb[j], lp.ub[j]
        if lo is not None:
            maps.append((lo, [(ny, ONE)]))
            if hi is not None:
                extra.append(({ny: -ONE}, lo - hi))
            ny += 1
        elif hi is not None:
            maps.append((hi, [(ny, -ONE)]))
            ny += 1
        else:
            maps.append((ZERO, [(ny, ONE), (ny + 1, -ONE)]))
            ny += 2
    G = [[ZERO] * ny for _ in range(ny)]
    g = [ZERO] * ny
    for j in range(n):
        w2 = 2 * as_q(weights[j])
        const, terms = maps[j]
        lin = lp.objective[j] if lp.sense == "min" else -lp.objective[j]
        for c1, s1 in terms:
            g[c1] += s1 * (lin + w2 * const)
            for c2, s2 in terms:
                G[c1][c2] += w2 * s1 * s2
    A = []
    b = []
    for r in lp.rows:
        vec = [ZERO] * ny
        rr = r.rhs
        for j, a in r.coeffs.items():
            const, terms = maps[j]
            rr -= a * const
            for c, s in terms:
                vec[c] += a * s
        if r.rel in (GE, EQ):
            A.append(vec)
            b.append(rr)
        if r.rel in (LE, EQ):
            A.append([-v for v in vec])
            b.append(-rr)
    for coeffs, rr in extra:
        vec = [ZERO] * ny
        for c, v in coeffs.items():
            vec[c] = v
        A.append(vec)
        b.append(rr)
    m = len(A)
    size = ny + m
    M = [[ZERO] * size for _ in range(size)]
    for i in range(ny):
        for j in range(ny):
            M[i][j] = G[i][j]
        for k in range(m):
            M[i][ny + k] = -A[k][i]
    for k in range(m):
        for j in range(ny):
            M[ny + k][j] = A[k][j]
    qv = g + [-v for v in b]
    z = _lemke(M, qv)
    if z is None:
        return INFEASIBLE, []
    y = z[:ny]
    x = []
    for j in range(n):
        const, terms = maps[j]
        x.append(const + sum((s * y[c] for c, s in terms), ZERO))
    return OPTIMAL, x


def solve_diagonal_qp(
    lp: LinearProgram,
    weights: Sequence,
    separator: Optional[Separator] = None,
) -> SolveResult:
    """Minimise ``sum w_j x_j^2 + (linear objective of lp)`` over ``lp``'s region.

    ``weights`` must be nonnegative. Integrality kinds are ignored. The
    objective reported is the full quadratic value. ``separator`` works as
    in :func:`solve_mip`: rows it returns are added and the solve repeated.
    """
    w = [as_q(v) for v in weights]
    if len(w) != lp.n_vars:
        raise ValueError("one weight per variable required")
    if any(v < 0 for v in w):
        raise ValueError("weights must be nonnegative")
    work = lp.copy()
    sign = ONE if work.sense == "min" else -ONE
    while True:
        if all(v > 0 for v in w):
            G = [2 * v for v in w]
            g = [sign * c for c in work.objective]
            status, x, _ = _goldfarb_idnani(G, g, _rows_of(work))
        else:
            status, x = _lemke_qp(work, w)
        if status != OPTIMAL:
            return SolveResult(INFEASIBLE)
        if separator is None:
            break
        cuts = list(separator(x))
        if not cuts:
            break
        for coeffs, rel, rhs in cuts:
            work.add_constraint(coeffs, rel, rhs)
    obj = sum((wi * xi * xi for wi, xi in zip(w, x)), ZERO) + sign * work.value(x)
    return SolveResult(OPTIMAL, x=x, objective=obj)
