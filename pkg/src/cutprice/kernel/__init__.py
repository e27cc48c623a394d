"""Exact rational LP, MIP and separable-QP solvers."""

from .lp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LPError,
    SolveResult,
    solve_lp,
)
from .mip import solve_mip
from .qp import solve_diagonal_qp

__all__ = [
    "EQ", "GE", "LE", "INFEASIBLE", "OPTIMAL", "UNBOUNDED",
    "LinearProgram", "LPError", "SolveResult",
    "solve_lp", "solve_mip", "solve_diagonal_qp",
]
