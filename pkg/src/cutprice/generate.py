"""Seeded random instances for property testing."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .model import AuctionInstance, Item, OxsBidderSpec, expand_oxs, instance_from_dict
from .rational import Q

PROFILES = ("single-minded", "xor", "oxs", "unit-demand")


@dataclass(frozen=True)
class GenParams:
    items: int = 3
    max_supply: int = 1
    bidders: int = 4
    max_bids_per_bidder: int = 3
    value_range: Tuple[int, int] = (1, 20)

    def __post_init__(self):
        if min(self.items, self.max_supply, self.bidders, self.max_bids_per_bidder) < 1:
            raise ValueError("generator sizes must be positive")
        lo, hi = self.value_range
        if lo < 0 or hi < lo:
            raise ValueError("bad value range")


def _names(n):
    return [chr(ord("A") + j) if n <= 26 else f"I{j + 1}" for j in range(n)]


def _bundle(rng, names, supply):
    size = rng.randint(1, len(names))
    chosen = sorted(rng.sample(range(len(names)), size))
    return {names[j]: rng.randint(1, supply[names[j]]) for j in chosen}


def _subset(a, b):
    return all(b.get(j, 0) >= q for j, q in a.items())


def generate_random_instance(params: GenParams, seed: int, profile: str = "xor") -> AuctionInstance:
    """Deterministic instance for ``(params, seed, profile)``.

    Bids are made monotone within a bidder: a bundle containing another is
    never cheaper. OXS bidders are emitted in expanded XOR form for that
    reason; raising a dominated bid leaves the valuation unchanged.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    rng = random.Random(f"{profile}:{seed}")
    names = _names(params.items)
    supply = {j: rng.randint(1, params.max_supply) for j in names}
    lo, hi = params.value_range
    bidders = []
    for i in range(params.bidders):
        rec: Dict = {"id": str(i + 1), "xor_bids": []}
        bids: List[Tuple[dict, object]] = []
        if profile == "oxs":
            cols = []
            budget = params.max_bids_per_bidder
            for _ in range(rng.randint(1, 2)):
                n = rng.randint(1, min(2, len(names)))
                size = 1
                for c in cols:
                    size *= len(c) + 1
                if size * (n + 1) - 1 > budget:
                    break
                cols.append(tuple((j, Q(rng.randint(lo, hi))) for j in rng.sample(names, n)))
            # expand to XOR so amounts can be made monotone below
            items = [Item(j, supply[j]) for j in names]
            best: Dict = {}
            for b in expand_oxs(OxsBidderSpec(str(i + 1), tuple(cols)), items):
                best[b.bundle] = max(best.get(b.bundle, b.amount), b.amount)
            bids = [(dict(bu), a) for bu, a in best.items()]
        else:
            if profile == "single-minded":
                count = 1
            else:
                count = rng.randint(1, params.max_bids_per_bidder)
            for _ in range(count):
                if profile == "unit-demand":
                    bu = {rng.choice(names): 1}
                    amt = rng.randint(lo, hi)
                else:
                    bu = _bundle(rng, names, supply)
                    amt = rng.randint(lo, hi) * sum(bu.values())
                if any(b == bu for b, _ in bids):
                    continue
                bids.append((bu, amt))
        bids.sort(key=lambda t: sum(t[0].values()))
        fixed = []
        for bu, amt in bids:
            floor = max([a for b, a in fixed if _subset(b, bu)], default=0)
            fixed.append((bu, max(amt, floor)))
        rec["xor_bids"] = [{"bundle": bu, "amount": str(a)} for bu, a in fixed]
        bidders.append(rec)
    return instance_from_dict({"items": [{"id": j, "supply": supply[j]} for j in names], "bidders": bidders})
