import json

import pytest

from cutprice.compare import compare_rules
from cutprice.pme import map_prices
from cutprice.report import ReportError, make_document, parse_report, prices_from_document, render_report
from cutprice.rules import vcg_payments


def test_text_describes_example_5_cuts(ex):
    inst = ex("ex5")
    text = render_report(map_prices(inst), "text", inst)
    assert "at most 3 of bids {1,2,3,4,5} can win" in text
    assert "115/2" in text


@pytest.mark.parametrize("name", ["ex1", "ex5", "ex7"])
def test_structured_round_trip(ex, name):
    inst = ex(name)
    doc = make_document(inst, [map_prices(inst), vcg_payments(inst)], compare_rules(inst), name)
    text = render_report(doc, "structured")
    assert render_report(parse_report(text), "structured") == text
    assert render_report(parse_report(text), "text") == render_report(doc, "text")


def test_empty_document():
    text = render_report(None, "structured")
    assert parse_report(text)["outcomes"] == []
    assert render_report(None, "text").strip() == "(empty report)"


def test_deterministic(ex):
    inst = ex("ex6")
    a = render_report(map_prices(inst), "structured", inst)
    b = render_report(map_prices(inst), "structured", inst)
    assert a == b


def test_prices_from_document(ex):
    inst = ex("ex2")
    doc = parse_report(render_report(map_prices(inst), "structured", inst))
    cuts, prices = prices_from_document(doc, inst)
    assert [int(v) for v in cuts[0].coeffs] == [2, 1, 1, 1]
    assert prices == [0, 40]
    cuts, prices = prices_from_document({"prices": ["5"]}, inst)
    assert cuts == [] and prices == [5]


def test_payments_only_outcome_has_no_prices(ex):
    inst = ex("ex5")
    doc = parse_report(render_report(vcg_payments(inst), "structured", inst))
    with pytest.raises(ReportError):
        prices_from_document(doc, inst)


@pytest.mark.parametrize("text", [
    "not json",
    json.dumps({"format": "other"}),
    json.dumps({"format": "cutprice-outcome/1", "outcomes": [{"rule": "x"}]}),
])
def test_parse_rejects(text):
    with pytest.raises(ReportError):
        parse_report(text)


def test_parse_rejects_non_canonical(ex):
    inst = ex("ex1")
    doc = json.loads(render_report(map_prices(inst), "structured", inst))
    doc["outcomes"][0]["revenue"] = "20/2"
    with pytest.raises(ReportError, match="canonical"):
        parse_report(json.dumps(doc))
