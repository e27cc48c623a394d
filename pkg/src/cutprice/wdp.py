"""Winner determination: integer WDP, its LP relaxation, and K(p) truncation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .kernel import LE, LinearProgram, solve_lp
from .model import AuctionInstance
from .rational import Q, ZERO, as_q


@dataclass(frozen=True)
class Allocation:
    selection: Tuple[int, ...]
    value: "Q"
    winners: FrozenSet[int]
    winning_bids: Tuple[int, ...]

    @property
    def mask(self) -> int:
        m = 0
        for k in self.winning_bids:
            m |= 1 << k
        return m

    def bid_of(self, i: int, inst: AuctionInstance) -> Optional[int]:
        for k in self.winning_bids:
            if inst.bid_owner[k] == i:
                return k
        return None

    def __len__(self):
        return len(self.selection)


def allocation_from_bids(inst: AuctionInstance, ks: Iterable[int], amounts: Optional[Sequence] = None) -> Allocation:
    ks = tuple(sorted(ks))
    amts = inst.b if amounts is None else amounts
    sel = [0] * inst.K
    for k in ks:
        sel[k] = 1
    value = sum((as_q(amts[k]) for k in ks), ZERO)
    return Allocation(tuple(sel), value, frozenset(inst.bid_owner[k] for k in ks), ks)


def allocation_from_mask(inst: AuctionInstance, mask: int, amounts: Optional[Sequence] = None) -> Allocation:
    return allocation_from_bids(inst, (k for k in range(inst.K) if (mask >> k) & 1), amounts)


def is_feasible(inst: AuctionInstance, ks: Iterable[int], supply: Optional[Sequence[int]] = None) -> bool:
    cap = list(inst.c if supply is None else supply)
    seen = set()
    for k in ks:
        i = inst.bid_owner[k]
        if i in seen:
            return False
        seen.add(i)
        for j in range(inst.J):
            cap[j] -= inst.A[j][k]
    return all(v >= 0 for v in cap)


def _wdp_search(inst, bidders, supply, amounts):
    # bids grouped by bidder; only strictly positive amounts ever win
    groups = []
    for i in bidders:
        opts = [k for k in inst.bidder_bids[i] if amounts[k] > 0 and all(inst.A[j][k] <= supply[j] for j in range(inst.J))]
        if opts:
            groups.append(opts)
    groups.sort(key=lambda g: g[0])
    tail = [ZERO] * (len(groups) + 1)
    for g in range(len(groups) - 1, -1, -1):
        tail[g] = tail[g + 1] + max(amounts[k] for k in groups[g])
    rem = list(supply)
    best_val = [ZERO]
    best_set: List[Tuple[int, ...]] = [()]
    chosen: List[int] = []

    def rec(g, val):
        if val + tail[g] < best_val[0]:
            return
        if g == len(groups):
            t = tuple(sorted(chosen))
            if val > best_val[0] or (val == best_val[0] and t < best_set[0]):
                best_val[0], best_set[0] = val, t
            return
        for k in groups[g]:
            if all(inst.A[j][k] <= rem[j] for j in range(inst.J)):
                for j in range(inst.J):
                    rem[j] -= inst.A[j][k]
                chosen.append(k)
                rec(g + 1, val + amounts[k])
                chosen.pop()
                for j in range(inst.J):
                    rem[j] += inst.A[j][k]
        rec(g + 1, val)

    rec(0, ZERO)
    return best_set[0], best_val[0]


def solve_wdp(
    inst: AuctionInstance,
    bidder_subset: Optional[Iterable[int]] = None,
    supply_override: Optional[Sequence[int]] = None,
    amounts: Optional[Sequence] = None,
) -> Allocation:
    """Optimal integer allocation over ``bidder_subset`` with the given supply.

    Ties go to the allocation whose sorted winning-bid indices are
    lexicographically smallest. Bids with amount 0 are never selected.
    ``amounts`` replaces the bid amounts (used for separation).
    """
    bidders = tuple(range(inst.I)) if bidder_subset is None else tuple(sorted(set(bidder_subset)))
    supply = tuple(inst.c) if supply_override is None else tuple(int(v) for v in supply_override)
    if any(v < 0 for v in supply):
        raise ValueError("supply_override must be nonnegative")
    amts = inst.b if amounts is None else [as_q(a) for a in amounts]
    key = None
    if amounts is None:
        cache = inst.__dict__.setdefault("_wdp_cache", {})
        key = (bidders, supply)
        hit = cache.get(key)
        if hit is not None:
            return hit
    ks, _ = _wdp_search(inst, bidders, supply, amts)
    alloc = allocation_from_bids(inst, ks, amts)
    if key is not None:
        cache[key] = alloc
    return alloc


def wdp_value(inst, bidder_subset=None, supply_override=None) -> "Q":
    return solve_wdp(inst, bidder_subset, supply_override).value


@dataclass(frozen=True)
class FractionalSolution:
    x: Tuple["Q", ...]
    value: "Q"
    duals: Tuple["Q", ...] = ()

    @property
    def is_integral(self) -> bool:
        return all(v == 0 or v == 1 for v in self.x)


def wdp_lp_program(inst, cuts=(), bidder_subset=None, supply_override=None) -> LinearProgram:
    bidders = set(range(inst.I)) if bidder_subset is None else set(bidder_subset)
    supply = inst.c if supply_override is None else supply_override
    lp = LinearProgram("max")
    for k in range(inst.K):
        allowed = inst.bid_owner[k] in bidders
        lp.add_var(obj=inst.b[k], lb=0, ub=1 if allowed else 0)
    for j in range(inst.J):
        lp.add_constraint({k: inst.A[j][k] for k in range(inst.K) if inst.A[j][k]}, LE, supply[j])
    for cut in cuts:
        lp.add_constraint({k: v for k, v in enumerate(cut.coeffs) if v}, LE, cut.rhs)
    for i in range(inst.I):
        lp.add_constraint({k: 1 for k in inst.bidder_bids[i]}, LE, 1)
    return lp


def solve_wdp_lp(inst, bidder_subset=None, supply_override=None, cuts=()) -> FractionalSolution:
    """Exact optimum of the LP relaxation (optionally with cut rows)."""
    res = solve_lp(wdp_lp_program(inst, cuts, bidder_subset, supply_override))
    return FractionalSolution(tuple(res.x), res.objective, tuple(res.duals))


def extended_column(inst, k: int, cuts=()) -> List[int]:
    """Bundle of bid ``k`` over natural items followed by cut coefficients."""
    return [inst.A[j][k] for j in range(inst.J)] + [c.coeffs[k] for c in cuts]


def price_truncated_bids(inst: AuctionInstance, prices: Sequence, cuts=()) -> AuctionInstance:
    """K(p): each bid's amount becomes its price ``p . a^k`` if affordable, else 0.

    ``prices`` covers natural items then one entry per cut.
    """
    prices = [as_q(v) for v in prices]
    new = []
    for k in range(inst.K):
        cost = sum((p * a for p, a in zip(prices, extended_column(inst, k, cuts)) if a), ZERO)
        new.append(cost if cost <= inst.b[k] else ZERO)
    return inst.with_amounts(new)
