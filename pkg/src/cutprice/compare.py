"""Run every pricing rule on one instance and compare revenues."""

from __future__ import annotations

from typing import Dict, List, Optional

from .allocations import direction_matrix
from .cuts import awe_loop, core_point_to_awe
from .dual import PreconditionError, solve_quad_dual, verify_core, verify_we
from .outcome import PricingOutcome
from .pme import check_pme, map_prices
from .rules import mrc_payments, pay_as_bid, vcg_payments
from .wdp import solve_wdp, solve_wdp_lp

RULES = ("nwe", "awe", "map", "mrc", "vcg", "paybid")


class NoNaturalEquilibrium(PreconditionError):
    pass


def _priced(rule, inst, xstar, cuts, pv):
    out = PricingOutcome(rule, xstar, pv.payments, pv, list(cuts))
    out.certificates["we"] = verify_we(inst, cuts, xstar, pv.all_prices).is_we
    out.certificates["core"] = verify_core(inst, xstar, pv.payments).is_core
    out.certificates["pme"] = check_pme(inst, cuts, xstar, pv, require_we=False).is_pme if out.certificates["we"] else False
    return out


def nwe_outcome(inst, xstar=None) -> PricingOutcome:
    xstar = solve_wdp(inst) if xstar is None else xstar
    if solve_wdp_lp(inst).value != xstar.value:
        raise NoNaturalEquilibrium("WDP-LP has an integrality gap; no natural WE exists")
    return _priced("nwe", inst, xstar, [], solve_quad_dual(inst, [], xstar))


def awe_outcome(inst, xstar=None) -> PricingOutcome:
    xstar = solve_wdp(inst) if xstar is None else xstar
    cuts, pv, trace = awe_loop(inst, xstar=xstar)
    out = _priced("awe", inst, xstar, cuts, pv)
    out.extra["gap_trace"] = trace
    return out


def run_rule(inst, rule: str, lift_mode: str = "minimal") -> PricingOutcome:
    if rule == "nwe":
        return nwe_outcome(inst)
    if rule == "awe":
        return awe_outcome(inst)
    if rule == "map":
        return map_prices(inst, lift_mode)
    if rule == "mrc":
        return mrc_payments(inst)
    if rule == "vcg":
        return vcg_payments(inst)
    if rule == "paybid":
        return pay_as_bid(inst)
    raise ValueError(f"unknown rule {rule!r}")


def vcg_linearizes_to_pme(inst, vcg: Optional[PricingOutcome] = None) -> bool:
    """Can VCG payments be written as WE prices (with one cut) that form a PME?"""
    xstar = solve_wdp(inst)
    vcg = vcg_payments(inst, xstar) if vcg is None else vcg
    if not vcg.certificates.get("core"):
        return False
    pv, cut = core_point_to_awe(inst, vcg.payments, xstar)
    cuts = [cut] if cut is not None else []
    if not verify_we(inst, cuts, xstar, pv.all_prices).is_we:
        return False
    return check_pme(inst, cuts, xstar, pv, require_we=False).is_pme


def compare_rules(inst, lift_mode: str = "minimal") -> Dict:
    """Five rows (pay-as-bid, NWE or AWE, MAP, MRC, VCG) plus the revenue chain.

    Also reports the VCG linearizability verdict and, when the items split
    into unrelated markets, the together-versus-split revenues.
    """
    xstar = solve_wdp(inst)
    rows: List[PricingOutcome] = [pay_as_bid(inst, xstar)]
    has_nwe = solve_wdp_lp(inst).value == xstar.value
    rows.append(nwe_outcome(inst, xstar) if has_nwe else awe_outcome(inst, xstar))
    rows.append(map_prices(inst, lift_mode, xstar))
    rows.append(mrc_payments(inst, xstar))
    rows.append(vcg_payments(inst, xstar))
    rev = {r.rule: r.revenue for r in rows}
    chain = [rev["map"], rev["mrc"], rev["vcg"]]
    if has_nwe:
        chain.insert(0, rev["nwe"])
    chain_ok = all(a >= b for a, b in zip(chain, chain[1:]))
    lin = vcg_linearizes_to_pme(inst, rows[-1])
    return {
        "rows": rows,
        "revenues": rev,
        "has_nwe": has_nwe,
        "chain_ok": chain_ok,
        "vcg_equals_mrc": rev["vcg"] == rev["mrc"],
        "vcg_pme_linearizable": lin,
        "unrelated_goods": unrelated_goods_check(inst, lift_mode),
    }


# --------------------------------------------------------------------------
# unrelated goods


def _partitions(xs):
    if not xs:
        yield []
        return
    first, rest = xs[0], xs[1:]
    for part in _partitions(rest):
        for n in range(len(part)):
            yield part[:n] + [[first] + part[n]] + part[n + 1:]
        yield [[first]] + part


def _group_bids(inst, i, group):
    g = set(group)
    return [(inst.bids[k].bundle, inst.bids[k].amount) for k in inst.bidder_bids[i]
            if all(j in g for j, _ in inst.bids[k].bundle)]


def _additive(inst, groups) -> bool:
    from collections import Counter
    from itertools import product
    order = {it.id: n for n, it in enumerate(inst.items)}
    for i in range(inst.I):
        per = [_group_bids(inst, i, g) for g in groups]
        want = Counter()
        for pick in product(*[[None] + p for p in per]):
            chosen = [c for c in pick if c is not None]
            if not chosen:
                continue
            bundle = tuple(sorted((t for bu, _ in chosen for t in bu), key=lambda t: order[t[0]]))
            want[(bundle, sum(a for _, a in chosen))] += 1
        have = Counter((inst.bids[k].bundle, inst.bids[k].amount) for k in inst.bidder_bids[i])
        if want != have:
            return False
    return True


def _sub_instance(inst, group):
    from .model import make_instance
    return make_instance(
        {it.id: it.supply for it in inst.items if it.id in group},
        [(bd.id, [(dict(bu), a) for bu, a in _group_bids(inst, i, group)]) for i, bd in enumerate(inst.bidders)],
    )


def split_unrelated(inst, max_items: int = 6):
    """Finest item partition over which every bidder's values simply add.

    Returns the per-group sub-instances, or ``None`` when the instance does
    not split (or has too many items to search partitions).
    """
    if inst.J > max_items or inst.J < 2:
        return None
    best = None
    for part in _partitions([it.id for it in inst.items]):
        if len(part) < 2 or (best is not None and len(part) <= len(best)):
            continue
        if _additive(inst, part):
            best = part
    if best is None:
        return None
    best = sorted((sorted(g, key=lambda j: inst.item_index[j]) for g in best), key=lambda g: inst.item_index[g[0]])
    return [_sub_instance(inst, g) for g in best]


def combine_unrelated(*markets):
    """Join markets on disjoint items; a bidder's values add across them."""
    from itertools import product
    from .model import make_instance
    items = {}
    ids = []
    for m in markets:
        for it in m.items:
            if it.id in items:
                raise ValueError(f"item {it.id!r} appears in two markets")
            items[it.id] = it.supply
        for bd in m.bidders:
            if bd.id not in ids:
                ids.append(bd.id)
    bidders = []
    for bid_id in ids:
        per = []
        for m in markets:
            idx = [n for n, bd in enumerate(m.bidders) if bd.id == bid_id]
            per.append([(m.bids[k].bundle, m.bids[k].amount) for k in m.bidder_bids[idx[0]]] if idx else [])
        bl = []
        for pick in product(*[[None] + p for p in per]):
            chosen = [c for c in pick if c is not None]
            if chosen:
                bundle = {}
                for bu, _ in chosen:
                    bundle.update(dict(bu))
                bl.append((bundle, sum(a for _, a in chosen)))
        bidders.append((bid_id, bl))
    return make_instance(items, bidders)


def unrelated_goods_check(inst, lift_mode: str = "minimal") -> Optional[Dict]:
    """Compare MAP and MRC revenue sold together versus in the split markets."""
    parts = split_unrelated(inst)
    if parts is None:
        return None
    together_map = map_prices(inst, lift_mode).revenue
    together_mrc = mrc_payments(inst).revenue
    split_map = sum((map_prices(p, lift_mode).revenue for p in parts), together_map * 0)
    split_mrc = sum((mrc_payments(p).revenue for p in parts), together_mrc * 0)
    return {
        "groups": [[it.id for it in p.items] for p in parts],
        "map_together": together_map,
        "map_split": split_map,
        "mrc_together": together_mrc,
        "mrc_split": split_mrc,
        "map_additive": together_map == split_map,
    }
