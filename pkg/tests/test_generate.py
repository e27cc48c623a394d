import pytest
from hypothesis import given, settings, strategies as st

from cutprice.compare import compare_rules
from cutprice.generate import PROFILES, GenParams, generate_random_instance
from cutprice.model import serialize_instance


@given(seed=st.integers(-2**63, 2**64), profile=st.sampled_from(PROFILES))
@settings(max_examples=50, deadline=None)
def test_deterministic(seed, profile):
    p = GenParams(items=3, bidders=3, max_bids_per_bidder=3, max_supply=2)
    a = generate_random_instance(p, seed, profile)
    b = generate_random_instance(p, seed, profile)
    assert serialize_instance(a) == serialize_instance(b)


@given(seed=st.integers(0, 2**32), profile=st.sampled_from(PROFILES))
@settings(max_examples=100, deadline=None)
def test_monotone_and_bounded(seed, profile):
    p = GenParams(items=4, bidders=3, max_bids_per_bidder=4, max_supply=2)
    inst = generate_random_instance(p, seed, profile)
    for i in range(inst.I):
        ks = inst.bidder_bids[i]
        assert 1 <= len(ks) <= 4
        for k in ks:
            for h in ks:
                sub = all(inst.A[j][k] <= inst.A[j][h] for j in range(inst.J))
                if sub:
                    assert inst.b[k] <= inst.b[h]
    if profile == "single-minded":
        assert all(len(ks) == 1 for ks in inst.bidder_bids)
    if profile == "unit-demand":
        assert all(sum(inst.A[j][k] for j in range(inst.J)) == 1 for k in range(inst.K))


def test_one_bidder_pays_nothing():
    for seed in range(10):
        inst = generate_random_instance(GenParams(bidders=1), seed, "xor")
        r = compare_rules(inst)["revenues"]
        assert r["vcg"] == r["mrc"] == r["map"] == 0


def test_bad_params():
    with pytest.raises(ValueError):
        GenParams(items=0)
    with pytest.raises(ValueError):
        GenParams(value_range=(5, 1))
    with pytest.raises(ValueError):
        generate_random_instance(GenParams(), 1, "bogus")
