"""``cutprice`` command line: solve, price, check, compare, explain, gen."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .allocations import CapacityError as EnumCapacityError
from .compare import RULES, NoNaturalEquilibrium, compare_rules, run_rule
from .dual import PreconditionError, verify_core, verify_we, payments_from_prices
from .generate import PROFILES, GenParams, generate_random_instance
from .model import InstanceError, load_instance, serialize_instance
from .pme import LIFT_MODES, check_pme
from .report import ReportError, make_document, parse_report, prices_from_document, render_report
from .rules import CapacityError
from .wdp import solve_wdp, solve_wdp_lp
from .rational import format_rational


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cutprice", description="Exact pricing for XOR combinatorial auctions.")
    p.add_argument("--version", action="version", version=f"cutprice {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def fmt(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("-o", "--output", help="write the document here instead of stdout")

    s = sub.add_parser("solve", help="winner determination and LP relaxation")
    s.add_argument("file")
    fmt(s)

    s = sub.add_parser("price", help="run one pricing rule (or all)")
    s.add_argument("--rule", choices=RULES + ("all",), default="map")
    s.add_argument("--lift-mode", choices=LIFT_MODES, default="minimal")
    s.add_argument("file")
    fmt(s)

    s = sub.add_parser("check", help="certify stored prices or payments")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--pme", action="store_true")
    g.add_argument("--we", action="store_true")
    g.add_argument("--core", action="store_true")
    s.add_argument("--prices", required=True, help="outcome document or {\"prices\": [...]} file")
    s.add_argument("file")
    fmt(s)

    s = sub.add_parser("compare", help="compare all rules on an instance or a directory")
    s.add_argument("--dir", action="store_true", help="treat path as a directory of .caj files")
    s.add_argument("--lift-mode", choices=LIFT_MODES, default="minimal")
    s.add_argument("path")
    fmt(s)

    s = sub.add_parser("explain", help="describe a stored outcome in words")
    s.add_argument("outcome")

    s = sub.add_parser("gen", help="emit a seeded random instance")
    s.add_argument("--profile", choices=PROFILES, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--items", type=_positive, default=3)
    s.add_argument("--max-supply", type=_positive, default=1)
    s.add_argument("--bidders", type=_positive, default=4)
    s.add_argument("--max-bids", type=_positive, default=3)
    s.add_argument("--min-value", type=int, default=1)
    s.add_argument("--max-value", type=int, default=20)
    s.add_argument("-o", "--output")
    return p


def _emit(text: str, path: Optional[str], out) -> None:
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)


def _render(doc, args) -> str:
    return render_report(doc, "structured" if args.format == "json" else "text")


def _cmd_solve(args, out):
    inst = load_instance(args.file)
    x = solve_wdp(inst)
    lp = solve_wdp_lp(inst)
    doc = {
        "format": "cutprice-solve/1",
        "winning_bids": [k + 1 for k in x.winning_bids],
        "labels": [inst.bid_label(k) for k in x.winning_bids],
        "value": format_rational(x.value),
        "lp_value": format_rational(lp.value),
        "integrality_gap": format_rational(lp.value - x.value),
    }
    if args.format == "json":
        import json
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = (f"winners: {', '.join(doc['labels']) or 'none'}\n"
                f"value: {doc['value']}\nLP value: {doc['lp_value']}\ngap: {doc['integrality_gap']}\n")
    _emit(text, args.output, out)
    return 0


def _cmd_price(args, out):
    inst = load_instance(args.file)
    rules = [r for r in RULES] if args.rule == "all" else [args.rule]
    outcomes = []
    for r in rules:
        try:
            outcomes.append(run_rule(inst, r, args.lift_mode))
        except NoNaturalEquilibrium as exc:
            if args.rule != "all":
                raise
            print(f"nwe skipped: {exc}", file=sys.stderr)
    _emit(_render(make_document(inst, outcomes, name=Path(args.file).name), args), args.output, out)
    return 0


def _load_prices(path):
    import json
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    return parse_report(text) if isinstance(raw, dict) and "format" in raw else raw


def _cmd_check(args, out):
    inst = load_instance(args.file)
    doc = _load_prices(args.prices)
    cuts, prices = prices_from_document(doc, inst)
    x = solve_wdp(inst)
    result = {"format": "cutprice-check/1", "instance": Path(args.file).name}
    if args.pme:
        rep = check_pme(inst, cuts, x, prices)
        result.update(check="pme", verdict=rep.is_pme, revenue=format_rational(rep.revenue),
                      shortfall={inst.bidders[i].id: format_rational(v) for i, v in sorted(rep.shortfall.items())})
    elif args.we:
        rep = verify_we(inst, cuts, x, prices)
        result.update(check="we", verdict=rep.is_we, envy_free=rep.envy_free, market_cleared=rep.market_cleared,
                      envious_bidders=[inst.bidders[i].id for i in rep.envy_violations],
                      unsold_priced=list(rep.unsold_priced))
    else:
        pay = payments_from_prices(inst, x, prices, cuts)
        rep = verify_core(inst, x, pay)
        result.update(check="core", verdict=rep.is_core,
                      blocking_coalition=None if rep.blocking_coalition is None else
                      [inst.bidders[i].id for i in rep.blocking_coalition])
    if args.format == "json":
        import json
        text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    else:
        name = {"pme": "PME", "we": "WE", "core": "core"}[result["check"]]
        text = f"{name}: {'yes' if result['verdict'] else 'not ' + name}\n"
        for k in sorted(result):
            if k not in ("format", "check", "verdict", "instance"):
                v = result[k]
                if isinstance(v, dict):
                    v = ", ".join(f"{a}={b}" for a, b in v.items()) or "none"
                elif isinstance(v, list):
                    v = ", ".join(map(str, v)) or "none"
                text += f"  {k}: {v}\n"
    _emit(text, args.output, out)
    return 0


def _cmd_compare(args, out):
    path = Path(args.path)
    files = sorted(path.glob("*.caj")) if args.dir else [path]
    if args.dir and not files:
        raise InstanceError(f"no .caj files in {path}")
    texts = []
    ok = True
    for f in files:
        inst = load_instance(f)
        cmp = compare_rules(inst, args.lift_mode)
        ok = ok and cmp["chain_ok"]
        texts.append(_render(make_document(inst, [], cmp, f.name), args))
    _emit("".join(texts) if args.format == "text" else texts[0] if len(texts) == 1 else
          "[\n" + ",\n".join(t.rstrip() for t in texts) + "\n]\n", args.output, out)
    if not ok:
        raise AssertionError("revenue chain violated")
    return 0


def _cmd_explain(args, out):
    doc = parse_report(Path(args.outcome).read_text())
    out.write(render_report(doc, "text"))
    return 0


def _cmd_gen(args, out):
    params = GenParams(args.items, args.max_supply, args.bidders, args.max_bids, (args.min_value, args.max_value))
    inst = generate_random_instance(params, args.seed, args.profile)
    _emit(serialize_instance(inst), args.output, out)
    return 0


COMMANDS = {"solve": _cmd_solve, "price": _cmd_price, "check": _cmd_check,
            "compare": _cmd_compare, "explain": _cmd_explain, "gen": _cmd_gen}


def run_cli(argv: Optional[List[str]] = None, out=None) -> int:
    """Run one command; returns 0 success, 1 validation error, 2 internal failure."""
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (InstanceError, ReportError, PreconditionError, CapacityError, EnumCapacityError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # invariant violations inside the solvers
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
