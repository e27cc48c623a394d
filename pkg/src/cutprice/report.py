"""Text and structured (JSON) rendering of pricing outcomes."""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .cuts import describe_cut
from .model import AuctionInstance
from .outcome import Cut, PricingOutcome
from .rational import Q, as_q, format_rational

FORMAT_TAG = "cutprice-outcome/1"


class ReportError(ValueError):
    pass


def _r(x) -> str:
    return format_rational(x)


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(u) for k, u in v.items()}
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if hasattr(v, "numerator"):
        return _r(v)
    return str(v)


def outcome_to_dict(out: PricingOutcome, inst: AuctionInstance) -> dict:
    x = out.allocation
    art = list(out.prices.artificial) if out.prices is not None else [None] * len(out.cuts)
    cuts = []
    for cut, price in zip(out.cuts, art):
        cuts.append({
            "coeffs": [_r(v) for v in cut.coeffs],
            "rhs": _r(cut.rhs),
            "price": None if price is None else _r(price),
            "description": describe_cut(cut, inst),
        })
    doc = {
        "rule": out.rule,
        "revenue": _r(out.revenue),
        "allocation": {
            "winning_bids": [k + 1 for k in x.winning_bids],
            "labels": [inst.bid_label(k) for k in x.winning_bids],
            "value": _r(x.value),
        },
        "payments": {inst.bidders[i].id: _r(out.payments[i]) for i in range(inst.I)},
        "prices": None,
        "cuts": cuts,
        "certificates": {k: out.certificates[k] for k in sorted(out.certificates)},
        "metadata": {k: _jsonable(v) for k, v in sorted(out.extra.items()) if k != "gap_trace"},
    }
    if out.prices is not None:
        doc["prices"] = {
            "items": {it.id: _r(p) for it, p in zip(inst.items, out.prices.natural)},
            "surplus": {inst.bidders[i].id: _r(s) for i, s in enumerate(out.prices.surplus)},
        }
    return doc


def comparison_to_dict(cmp: dict) -> dict:
    rows = []
    for out in cmp["rows"]:
        rows.append({
            "rule": out.rule,
            "revenue": _r(out.revenue),
            "payments": [_r(v) for v in out.payments],
            "we": out.certificates.get("we"),
            "core": out.certificates.get("core"),
            "pme": out.certificates.get("pme"),
            "cuts_count": len(out.cuts),
        })
    return {
        "rows": rows,
        "has_nwe": cmp["has_nwe"],
        "chain_ok": cmp["chain_ok"],
        "vcg_equals_mrc": cmp["vcg_equals_mrc"],
        "vcg_pme_linearizable": cmp["vcg_pme_linearizable"],
        "unrelated_goods": None if cmp.get("unrelated_goods") is None else _jsonable(cmp["unrelated_goods"]),
    }


def make_document(inst: Optional[AuctionInstance] = None, outcomes: Iterable[PricingOutcome] = (),
                  comparison: Optional[dict] = None, name: str = "") -> dict:
    doc = {"format": FORMAT_TAG, "instance": name, "outcomes": [outcome_to_dict(o, inst) for o in outcomes]}
    if comparison is not None:
        doc["comparison"] = comparison_to_dict(comparison)
    return doc


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _flag(v) -> str:
    return {True: "yes", False: "no", None: "-"}[v]


def _text(doc: dict) -> str:
    lines: List[str] = []
    if doc.get("instance"):
        lines.append(f"instance: {doc['instance']}")
    for o in doc["outcomes"]:
        a = o["allocation"]
        lines.append(f"[{o['rule']}] revenue {o['revenue']}")
        lines.append(f"  winners: " + (", ".join(f"bid {k} ({lab})" for k, lab in zip(a["winning_bids"], a["labels"])) or "none")
                     + f"; value {a['value']}")
        lines.append("  payments: " + ", ".join(f"{b}={v}" for b, v in o["payments"].items()))
        if o["prices"] is not None:
            lines.append("  item prices: " + ", ".join(f"{j}={v}" for j, v in o["prices"]["items"].items()))
        for c in o["cuts"]:
            price = "" if c["price"] is None else f", price {c['price']}"
            lines.append(f"  cut ({','.join(c['coeffs'])}) <= {c['rhs']}{price}: {c['description']}")
        certs = o["certificates"]
        if certs:
            lines.append("  " + ", ".join(f"{k}: {_flag(v)}" for k, v in certs.items()))
    cmp = doc.get("comparison")
    if cmp:
        lines.append(f"{'rule':8s} {'revenue':>10s}  we   core pme  cuts")
        for r in cmp["rows"]:
            lines.append(f"{r['rule']:8s} {r['revenue']:>10s}  {_flag(r['we']):4s} {_flag(r['core']):4s} "
                         f"{_flag(r['pme']):4s} {r['cuts_count']}")
        lines.append("revenue chain: " + ("OK" if cmp["chain_ok"] else "VIOLATED"))
        lines.append("VCG linearizable to PME: " + _flag(cmp["vcg_pme_linearizable"])
                     + " (VCG = MRC: " + _flag(cmp["vcg_equals_mrc"]) + ")")
        ug = cmp.get("unrelated_goods")
        if ug:
            groups = " | ".join(",".join(g) for g in ug["groups"])
            lines.append(f"unrelated markets {groups}: MAP {ug['map_together']} together, {ug['map_split']} split; "
                         f"MRC {ug['mrc_together']} together, {ug['mrc_split']} split")
    if not lines:
        lines.append("(empty report)")
    return "\n".join(lines) + "\n"


def render_report(doc: Union[dict, PricingOutcome, Sequence[PricingOutcome]] = None, fmt: str = "text",
                  inst: Optional[AuctionInstance] = None) -> str:
    """Render a document (or outcomes, given ``inst``) as ``text`` or ``structured``."""
    if doc is None:
        doc = make_document()
    elif isinstance(doc, PricingOutcome):
        doc = make_document(inst, [doc])
    elif not isinstance(doc, dict):
        doc = make_document(inst, doc)
    if fmt == "structured" or fmt == "json":
        return _dump(doc)
    if fmt == "text":
        return _text(doc)
    raise ReportError(f"unknown format {fmt!r}")


def _check_rational(v, where):
    if v is None:
        return
    if not isinstance(v, str):
        raise ReportError(f"{where}: expected rational string, got {v!r}")
    try:
        q = as_q(v)
    except ValueError as exc:
        raise ReportError(f"{where}: {exc}") from exc
    if format_rational(q) != v:
        raise ReportError(f"{where}: {v!r} is not in canonical form")


def parse_report(text: str) -> dict:
    """Parse and validate a structured document; ``_dump`` of the result is ``text``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise ReportError("not a cutprice outcome document")
    outs = doc.get("outcomes")
    if not isinstance(outs, list):
        raise ReportError("'outcomes' must be a list")
    for n, o in enumerate(outs):
        for key in ("rule", "revenue", "allocation", "payments", "prices", "cuts", "certificates"):
            if key not in o:
                raise ReportError(f"outcome {n}: missing {key!r}")
        _check_rational(o["revenue"], f"outcome {n} revenue")
        for b, v in o["payments"].items():
            _check_rational(v, f"outcome {n} payment {b}")
        if o["prices"] is not None:
            for j, v in o["prices"]["items"].items():
                _check_rational(v, f"outcome {n} price {j}")
        for c in o["cuts"]:
            for v in c["coeffs"] + [c["rhs"], c["price"]]:
                _check_rational(v, f"outcome {n} cut")
    return doc


def prices_from_document(doc: dict, inst: AuctionInstance, index: int = 0) -> Tuple[List[Cut], List["Q"]]:
    """Cuts and price vector (items then cuts) stored in a document.

    Also accepts the bare form ``{"prices": [...], "cuts": [...]}``.
    """
    if "outcomes" in doc:
        if not doc["outcomes"]:
            raise ReportError("document holds no outcome")
        o = doc["outcomes"][index]
        if o["prices"] is None:
            raise ReportError(f"outcome {o['rule']!r} carries payments only, no prices")
        items = o["prices"]["items"]
        try:
            natural = [as_q(items[it.id]) for it in inst.items]
        except KeyError as exc:
            raise ReportError(f"price for item {exc.args[0]!r} missing") from exc
        cut_docs = o["cuts"]
    else:
        raw = doc.get("prices")
        if not isinstance(raw, list) or len(raw) != inst.J:
            raise ReportError(f"'prices' must list {inst.J} item prices")
        natural = [as_q(v) for v in raw]
        cut_docs = doc.get("cuts", [])
    cuts, art = [], []
    for c in cut_docs:
        if len(c["coeffs"]) != inst.K:
            raise ReportError(f"cut has {len(c['coeffs'])} coefficients, instance has {inst.K} bids")
        cuts.append(Cut.make(c["coeffs"], c["rhs"]))
        art.append(as_q(c.get("price") or 0))
    return cuts, natural + art
