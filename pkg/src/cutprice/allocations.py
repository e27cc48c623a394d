"""Set-wise maximal allocations, the directions matrix D, and cut separation."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

from .rational import ZERO, as_q
from .wdp import Allocation, allocation_from_mask, is_feasible, solve_wdp

try:
    if os.environ.get("CUTPRICE_PURE_PYTHON"):
        raise ImportError("disabled by environment")
    from ._speedups import enumerate_allocations as _enumerate
    KERNEL = "compiled"
except ImportError:  # pragma: no cover - exercised when the extension is absent
    from ._enum_py import enumerate_allocations as _enumerate
    KERNEL = "python"

DEFAULT_BOUND = 24


class CapacityError(RuntimeError):
    pass


def _masks(inst, maximal_only: bool, bound: int):
    if inst.K > bound:
        raise CapacityError(
            f"{inst.K} bids exceeds exhaustive bound {bound}; use dynamic D mode"
        )
    flat = [inst.A[j][k] for j in range(inst.J) for k in range(inst.K)]
    return _enumerate(flat, inst.J, inst.K, list(inst.c), list(inst.bid_owner), inst.I, maximal_only)


def enumerate_maximal_allocations(inst, bound: int = DEFAULT_BOUND) -> List[Allocation]:
    return [allocation_from_mask(inst, m) for m in _masks(inst, True, bound)]


def enumerate_feasible_allocations(inst, bound: int = DEFAULT_BOUND) -> List[Allocation]:
    """Every feasible allocation, including the empty one (oracle use)."""
    return [allocation_from_mask(inst, m) for m in _masks(inst, False, bound)]


def maximal_completion(inst, ks: Sequence[int]) -> List[int]:
    """Greedily add bids in index order until no further bid fits."""
    chosen = list(ks)
    for k in range(inst.K):
        if k not in chosen and is_feasible(inst, chosen + [k]):
            chosen.append(k)
    return sorted(chosen)


@dataclass
class DirectionMatrix:
    """Columns ``x* - x^l`` over maximal allocations ``x^l``."""

    xstar: Allocation
    allocations: List[Allocation]
    mode: str = "exhaustive"
    _seen: set = field(default_factory=set, repr=False)

    def __post_init__(self):
        self._seen = {a.mask for a in self.allocations}

    @property
    def columns(self) -> List[List[int]]:
        xs = self.xstar.selection
        return [[xs[k] - a.selection[k] for k in range(len(xs))] for a in self.allocations]

    def column(self, l: int) -> List[int]:
        xs = self.xstar.selection
        a = self.allocations[l].selection
        return [xs[k] - a[k] for k in range(len(xs))]

    def append(self, alloc: Allocation) -> bool:
        if alloc.mask in self._seen:
            return False
        self._seen.add(alloc.mask)
        self.allocations.append(alloc)
        return True

    def __len__(self):
        return len(self.allocations)


def build_direction_matrix(xstar: Allocation, maximal: Sequence[Allocation], mode: str = "exhaustive") -> DirectionMatrix:
    if not maximal:
        raise ValueError("need at least one maximal allocation")
    return DirectionMatrix(xstar, list(maximal), mode)


def direction_matrix(inst, xstar: Allocation, mode: Optional[str] = None, bound: int = DEFAULT_BOUND) -> DirectionMatrix:
    """Exhaustive D when ``K <= bound``; otherwise start a dynamic D from x* alone."""
    if mode is None:
        mode = "exhaustive" if inst.K <= bound else "dynamic"
    if mode == "exhaustive":
        return build_direction_matrix(xstar, enumerate_maximal_allocations(inst, bound))
    start = allocation_from_mask(inst, sum(1 << k for k in maximal_completion(inst, xstar.winning_bids)))
    return DirectionMatrix(xstar, [start], "dynamic")


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class NewColumn:
    allocation: Allocation


def separate_cut(alpha: Sequence, xstar: Allocation, inst, D: Optional[DirectionMatrix] = None) -> Union[Valid, NewColumn]:
    """Certify ``alpha x <= alpha x*`` over all feasible x, or return a violator.

    The violator is extended to a maximal allocation; when ``D`` is given it
    is appended, so the same allocation is never returned twice.
    """
    alpha = [as_q(a) for a in alpha]
    if any(a < 0 for a in alpha):
        raise ValueError("alpha must be nonnegative")
    rhs = sum((a * x for a, x in zip(alpha, xstar.selection)), ZERO)
    best = solve_wdp(inst, amounts=alpha)
    if best.value <= rhs:
        return Valid()
    full = maximal_completion(inst, best.winning_bids)
    alloc = allocation_from_mask(inst, sum(1 << k for k in full))
    if D is not None:
        D.append(alloc)
    return NewColumn(alloc)
