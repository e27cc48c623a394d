"""Auction data model, instance-file parsing and constraint matrices.

An instance file is a JSON document::

    {"items": [{"id": "A", "supply": 1}, ...],
     "bidders": [{"id": "1",
                  "xor_bids": [{"bundle": {"A": 1}, "amount": "10"}],
                  "oxs_columns": [[{"item": "A", "amount": "8"}, ...], ...]}]}

Amounts are exact rationals written as ``"57.5"`` or ``"115/2"``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .rational import Q, format_rational, parse_rational


class InstanceError(ValueError):
    """Raised for malformed or invalid instance files."""


class ParseError(InstanceError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ValidationError(InstanceError):
    pass


@dataclass(frozen=True)
class Item:
    id: str
    supply: int


@dataclass(frozen=True)
class Bid:
    bidder_id: str
    bundle: Tuple[Tuple[str, int], ...]  # sorted (item, qty) pairs, qty > 0
    amount: "Q"

    def quantity(self, item_id: str) -> int:
        for j, q in self.bundle:
            if j == item_id:
                return q
        return 0

    def label(self) -> str:
        parts = []
        for j, q in self.bundle:
            parts.append(j if q == 1 else f"{q}{j}")
        return "".join(parts)


@dataclass(frozen=True)
class OxsBidderSpec:
    bidder_id: str
    columns: Tuple[Tuple[Tuple[str, "Q"], ...], ...]


@dataclass
class Bidder:
    id: str
    bids: List[Bid]
    oxs: Optional[OxsBidderSpec] = None
    n_explicit: int = 0


class AuctionInstance:
    """Immutable auction: items, bidders and the flat bid list.

    Bid index ``k`` runs over all bids in file order (each bidder's explicit
    XOR bids, then its OXS expansion); ``bid_owner[k]`` is the bidder index.
    """

    def __init__(self, items: Sequence[Item], bidders: Sequence[Bidder]):
        self.items: Tuple[Item, ...] = tuple(items)
        self.bidders: Tuple[Bidder, ...] = tuple(bidders)
        self.item_index: Dict[str, int] = {it.id: j for j, it in enumerate(self.items)}
        bids, owner = [], []
        self.bidder_bids: List[List[int]] = []
        for i, bd in enumerate(self.bidders):
            ks = []
            for b in bd.bids:
                ks.append(len(bids))
                bids.append(b)
                owner.append(i)
            self.bidder_bids.append(ks)
        self.bids: Tuple[Bid, ...] = tuple(bids)
        self.bid_owner: Tuple[int, ...] = tuple(owner)
        self.A, self.B, self.b, self.c = _matrices(self)

    @property
    def J(self) -> int:
        return len(self.items)

    @property
    def I(self) -> int:
        return len(self.bidders)

    @property
    def K(self) -> int:
        return len(self.bids)

    def column(self, k: int) -> List[int]:
        return [self.A[j][k] for j in range(self.J)]

    def with_amounts(self, amounts: Sequence) -> "AuctionInstance":
        """Copy with bid amounts replaced (bundles and order unchanged)."""
        amounts = list(amounts)
        new_bidders = []
        for i, bd in enumerate(self.bidders):
            nb = [Bid(b.bidder_id, b.bundle, Q(amounts[k])) for k, b in zip(self.bidder_bids[i], bd.bids)]
            new_bidders.append(Bidder(bd.id, nb, None, len(nb)))
        return AuctionInstance(self.items, new_bidders)

    def bid_label(self, k: int) -> str:
        b = self.bids[k]
        return f"b_{self.bidders[self.bid_owner[k]].id}({b.label()})={format_rational(b.amount)}"

    def __repr__(self) -> str:
        return f"AuctionInstance(J={self.J}, I={self.I}, K={self.K})"


def _matrices(inst: AuctionInstance):
    J, K = len(inst.items), len(inst.bids)
    A = [[0] * K for _ in range(J)]
    for k, bid in enumerate(inst.bids):
        for item, q in bid.bundle:
            A[inst.item_index[item]][k] = q
    B = [[0] * K for _ in range(len(inst.bidders))]
    for k, i in enumerate(inst.bid_owner):
        B[i][k] = 1
    b = [bid.amount for bid in inst.bids]
    c = [it.supply for it in inst.items]
    return A, B, b, c


def build_matrices(instance: AuctionInstance):
    """Return ``(A, B, b, c)`` with A J×K, B I×K (lists of lists)."""
    return instance.A, instance.B, instance.b, instance.c


def expand_oxs(spec: OxsBidderSpec, items: Sequence[Item]) -> List[Bid]:
    """XOR bids equivalent to an OXS bidder.

    Every way of taking at most one offer from each column, except taking
    nothing, becomes one bid. Bundles exceeding supply are dropped. Order:
    first by number of columns used, then in product order over columns.
    """
    supply = {it.id: it.supply for it in items}
    cols = spec.columns
    out: List[Bid] = []
    for size in range(1, len(cols) + 1):
        for chosen in itertools.combinations(range(len(cols)), size):
            for offers in itertools.product(*(cols[c] for c in chosen)):
                bundle: Dict[str, int] = {}
                amount = Q(0)
                for item, amt in offers:
                    bundle[item] = bundle.get(item, 0) + 1
                    amount += amt
                if any(q > supply.get(j, 0) for j, q in bundle.items()):
                    continue
                out.append(Bid(spec.bidder_id, tuple(sorted(bundle.items(), key=lambda t: _order(items, t[0]))), amount))
    return out


def _order(items, item_id):
    for j, it in enumerate(items):
        if it.id == item_id:
            return j
    return len(items)


# --------------------------------------------------------------------------
# parsing / serialization


def _need(obj, key, ctx, typ):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{ctx}: missing field '{key}'")
    v = obj[key]
    if not isinstance(v, typ):
        raise ValidationError(f"{ctx}: field '{key}' has wrong type")
    return v


def _amount(v, ctx):
    if isinstance(v, bool) or isinstance(v, float):
        raise ValidationError(f"{ctx}: amount must be a rational string or integer, not {v!r}")
    try:
        a = parse_rational(v)
    except (ValueError, TypeError) as e:
        raise ValidationError(f"{ctx}: bad amount {v!r}") from e
    if a < 0:
        raise ValidationError(f"{ctx}: negative amount {v!r}")
    return a


def instance_from_dict(doc: Mapping) -> AuctionInstance:
    if not isinstance(doc, dict):
        raise ValidationError("instance document must be an object")
    items: List[Item] = []
    seen = set()
    for n, it in enumerate(_need(doc, "items", "instance", list)):
        iid = str(_need(it, "id", f"item {n + 1}", (str, int)))
        sup = _need(it, "supply", f"item {iid}", int)
        if isinstance(sup, bool) or sup < 1:
            raise ValidationError(f"item {iid}: supply must be a positive integer")
        if iid in seen:
            raise ValidationError(f"duplicate item id '{iid}'")
        seen.add(iid)
        items.append(Item(iid, sup))
    supply = {it.id: it.supply for it in items}
    bidders: List[Bidder] = []
    bseen = set()
    for n, bd in enumerate(doc.get("bidders", []) or []):
        bid_id = str(_need(bd, "id", f"bidder {n + 1}", (str, int)))
        if bid_id in bseen:
            raise ValidationError(f"duplicate bidder id '{bid_id}'")
        bseen.add(bid_id)
        bids: List[Bid] = []
        for m, xb in enumerate(bd.get("xor_bids", []) or []):
            ctx = f"bidder {bid_id} bid {m + 1}"
            bundle = _need(xb, "bundle", ctx, dict)
            if not bundle:
                raise ValidationError(f"{ctx}: empty bundle")
            clean = {}
            for j, q in bundle.items():
                if j not in supply:
                    raise ValidationError(f"{ctx}: unknown item '{j}'")
                if not isinstance(q, int) or isinstance(q, bool) or q < 0:
                    raise ValidationError(f"{ctx}: quantity of item '{j}' must be a nonnegative integer")
                if q > supply[j]:
                    raise ValidationError(f"{ctx}: quantity {q} of item '{j}' exceeds supply {supply[j]}")
                if q:
                    clean[j] = q
            if not clean:
                raise ValidationError(f"{ctx}: empty bundle")
            amt = _amount(_need(xb, "amount", ctx, (str, int)), ctx)
            bids.append(Bid(bid_id, tuple(sorted(clean.items(), key=lambda t: _order(items, t[0]))), amt))
        n_explicit = len(bids)
        spec = None
        if bd.get("oxs_columns"):
            cols = []
            for ci, col in enumerate(bd["oxs_columns"]):
                offers = []
                used = set()
                for off in col:
                    ctx = f"bidder {bid_id} oxs column {ci + 1}"
                    j = str(_need(off, "item", ctx, (str, int)))
                    if j not in supply:
                        raise ValidationError(f"{ctx}: unknown item '{j}'")
                    if j in used:
                        raise ValidationError(f"{ctx}: item '{j}' offered twice")
                    used.add(j)
                    offers.append((j, _amount(_need(off, "amount", ctx, (str, int)), ctx)))
                if offers:
                    cols.append(tuple(offers))
            spec = OxsBidderSpec(bid_id, tuple(cols))
            bids.extend(expand_oxs(spec, items))
        bidders.append(Bidder(bid_id, bids, spec, n_explicit))
    return AuctionInstance(items, bidders)


def parse_instance(text: str) -> AuctionInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from e
    return instance_from_dict(doc)


def load_instance(path) -> AuctionInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def instance_to_dict(inst: AuctionInstance) -> dict:
    bidders = []
    for bd in inst.bidders:
        rec = {
            "id": bd.id,
            "xor_bids": [
                {"bundle": dict(b.bundle), "amount": format_rational(b.amount)}
                for b in bd.bids[: bd.n_explicit]
            ],
        }
        if bd.oxs is not None:
            rec["oxs_columns"] = [
                [{"item": j, "amount": format_rational(a)} for j, a in col] for col in bd.oxs.columns
            ]
        bidders.append(rec)
    return {"items": [{"id": it.id, "supply": it.supply} for it in inst.items], "bidders": bidders}


def serialize_instance(inst: AuctionInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def make_instance(items: Mapping[str, int], bidders: Sequence[Tuple[str, Sequence[Tuple[Mapping[str, int], object]]]]) -> AuctionInstance:
    """Build an instance from plain Python data (used by tests and the generator)."""
    doc = {
        "items": [{"id": j, "supply": s} for j, s in items.items()],
        "bidders": [
            {"id": bid_id, "xor_bids": [{"bundle": dict(bu), "amount": str(am)} for bu, am in bl]}
            for bid_id, bl in bidders
        ],
    }
    return instance_from_dict(doc)
