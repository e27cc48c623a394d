import json
from pathlib import Path

import pytest

from cutprice.model import (
    ParseError, ValidationError, load_instance, make_instance, parse_instance, serialize_instance,
)
from cutprice.rational import Q, format_rational, lcm_of_denominators, parse_rational

INST = Path(__file__).resolve().parent.parent / "instances"


def test_parse_rational_forms():
    assert parse_rational("57.5") == Q(115, 2)
    assert parse_rational("115/2") == Q(115, 2)
    assert parse_rational(3) == 3
    assert format_rational(Q(10, 4)) == "5/2"
    assert format_rational(Q(-6, 3)) == "-2"
    assert lcm_of_denominators([Q(1, 2), Q(1, 3), 4]) == 6
    for bad in (1.5, True, "x", None):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_matrices_example_1():
    inst = load_instance(INST / "ex1.caj")
    assert (inst.J, inst.I, inst.K) == (3, 4, 4)
    assert inst.A == [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]]
    assert inst.b == [10, 10, 10, 12]
    assert inst.c == [1, 1, 1]
    assert inst.B == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_oxs_expansion_example_7():
    inst = load_instance(INST / "ex7.caj")
    one = inst.bidders[0]
    # two columns of two offers each: 4 singletons plus 4 pairs
    assert one.n_explicit == 0
    assert len(inst.bidder_bids[0]) == 8
    labels = [inst.bids[k].label() for k in inst.bidder_bids[0]]
    assert labels[:4] == ["A", "B", "C", "D"]
    assert inst.bids[4].label() == "AC" and inst.bids[4].amount == 16


def test_oxs_drops_oversupplied_bundles():
    doc = {"items": [{"id": "A", "supply": 1}],
           "bidders": [{"id": "1", "oxs_columns": [[{"item": "A", "amount": "3"}], [{"item": "A", "amount": "2"}]]}]}
    inst = parse_instance(json.dumps(doc))
    assert [(b.label(), b.amount) for b in inst.bids] == [("A", 3), ("A", 2)]


def test_round_trip():
    for f in sorted(INST.glob("*.caj")):
        inst = load_instance(f)
        again = parse_instance(serialize_instance(inst))
        assert again.A == inst.A and again.b == inst.b and again.c == inst.c
        assert serialize_instance(again) == serialize_instance(inst)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_instance('{"items": [\n  {"id": "A", "supply": 1},\n  oops\n]}')
    assert exc.value.line == 3


@pytest.mark.parametrize("doc, fragment", [
    ({"items": [{"id": "A", "supply": 0}]}, "supply"),
    ({"items": [{"id": "A", "supply": 1}, {"id": "A", "supply": 1}]}, "duplicate item"),
    ({"items": [{"id": "A", "supply": 1}], "bidders": [{"id": "1", "xor_bids": [{"bundle": {"Z": 1}, "amount": "1"}]}]}, "unknown item"),
    ({"items": [{"id": "A", "supply": 1}], "bidders": [{"id": "1", "xor_bids": [{"bundle": {"A": 2}, "amount": "1"}]}]}, "exceeds supply"),
    ({"items": [{"id": "A", "supply": 1}], "bidders": [{"id": "1", "xor_bids": [{"bundle": {"A": 1}, "amount": "-1"}]}]}, "negative"),
    ({"items": [{"id": "A", "supply": 1}], "bidders": [{"id": "1", "xor_bids": [{"bundle": {"A": 1}, "amount": 1.5}]}]}, "wrong type"),
    ({"items": [{"id": "A", "supply": 1}], "bidders": [{"id": "1", "xor_bids": [{"bundle": {}, "amount": "1"}]}]}, "empty bundle"),
    ({"items": [{"id": "A", "supply": 1}], "bidders": [{"id": "1"}, {"id": "1"}]}, "duplicate bidder"),
])
def test_validation_errors(doc, fragment):
    with pytest.raises(ValidationError, match=fragment):
        parse_instance(json.dumps(doc))


def test_make_instance_and_labels():
    inst = make_instance({"A": 2, "B": 1}, [("x", [({"A": 2}, 7), ({"A": 1, "B": 1}, "9/2")])])
    assert inst.A == [[2, 1], [0, 1]]
    assert inst.bids[0].label() == "2A"
    assert inst.b[1] == Q(9, 2)
    assert list(inst.bid_owner) == [0, 0]


def test_with_amounts_keeps_structure():
    inst = load_instance(INST / "ex1.caj")
    cheaper = inst.with_amounts([1, 1, 1, 1])
    assert cheaper.A == inst.A and cheaper.b == [1, 1, 1, 1]
    assert inst.b[3] == 12
