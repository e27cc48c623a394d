import pytest
from hypothesis import example, given, settings, strategies as st

from harness import random_instance
from cutprice.compare import (
    NoNaturalEquilibrium, combine_unrelated, compare_rules, nwe_outcome, run_rule,
    split_unrelated, unrelated_goods_check,
)
from cutprice.generate import generate_random_instance
from cutprice.model import make_instance


def revenues(cmp):
    return {k: int(v) if v.denominator == 1 else v for k, v in cmp["revenues"].items()}


def test_example_7_strict_chain(ex):
    cmp = compare_rules(ex("ex7"))
    r = revenues(cmp)
    assert (r["nwe"], r["map"], r["mrc"], r["vcg"]) == (24, 20, 16, 16)
    assert cmp["chain_ok"] and cmp["has_nwe"]
    nwe = next(o for o in cmp["rows"] if o.rule == "nwe")
    assert nwe.certificates["pme"] is False


def test_example_4_chain(ex):
    cmp = compare_rules(ex("ex4"))
    r = revenues(cmp)
    assert r["nwe"] == r["map"] == 20 and r["mrc"] == r["vcg"] == 10
    assert [o.rule for o in cmp["rows"]] == ["paybid", "nwe", "map", "mrc", "vcg"]


def test_no_nwe_uses_awe_row(ex):
    cmp = compare_rules(ex("ex5"))
    assert [o.rule for o in cmp["rows"]] == ["paybid", "awe", "map", "mrc", "vcg"]
    assert not cmp["vcg_equals_mrc"] and not cmp["vcg_pme_linearizable"]
    with pytest.raises(NoNaturalEquilibrium):
        nwe_outcome(ex("ex5"))


def test_unit_demand_collapses():
    inst = make_instance({"A": 1, "B": 1}, [
        ("1", [({"A": 1}, 9), ({"B": 1}, 6)]),
        ("2", [({"A": 1}, 7), ({"B": 1}, 5)]),
        ("3", [({"A": 1}, 2), ({"B": 1}, 4)]),
    ])
    r = revenues(compare_rules(inst))
    assert r["nwe"] == r["map"] == r["mrc"] == r["vcg"]


@pytest.mark.parametrize("name", ["ex1", "ex1_1", "ex2", "ex3", "ex5", "ex6"])
def test_vcg_linearizability_biconditional(ex, name):
    cmp = compare_rules(ex(name))
    assert cmp["vcg_pme_linearizable"] == cmp["vcg_equals_mrc"]
    assert cmp["chain_ok"]


def test_example_4_unrelated_goods(ex):
    ug = unrelated_goods_check(ex("ex4"))
    assert ug["groups"] == [["A", "B"], ["C"]]
    assert ug["map_together"] == ug["map_split"] == 20
    assert (ug["mrc_together"], ug["mrc_split"]) == (10, 20)


def test_split_refuses_related_goods(ex):
    assert split_unrelated(ex("ex1")) is None


@settings(max_examples=40, deadline=None)
@given(s1=st.integers(0, 2**32), s2=st.integers(0, 2**32))
@example(s1=25683, s2=0)
def test_map_additive_over_random_unrelated_markets(s1, s2):
    a = random_instance("xor", s1, items=2, bidders=3, max_bids=2)
    b = random_instance("unit-demand", s2, items=1, bidders=3, max_bids=1)
    b = make_instance({"Z": b.items[0].supply},
                      [(bd.id, [({"Z": q}, a_) for bu, a_ in [(dict(bb.bundle), bb.amount) for bb in bd.bids] for q in bu.values()])
                       for bd in b.bidders])
    joint = combine_unrelated(a, b)
    ug = unrelated_goods_check(joint)
    if ug is not None:
        assert ug["map_additive"], ug


def test_run_rule_rejects_unknown(ex):
    with pytest.raises(ValueError):
        run_rule(ex("ex1"), "bogus")
