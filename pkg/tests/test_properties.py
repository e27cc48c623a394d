"""Random-instance properties over every generator profile (exact, zero tolerance)."""

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from harness import PROPERTIES, evaluate, random_instance
from cutprice.generate import PROFILES

shapes = st.fixed_dictionaries({
    "items": st.integers(1, 4),
    "bidders": st.integers(1, 5),
    "max_bids": st.integers(1, 3),
    "max_supply": st.integers(1, 2),
})
seeds = st.integers(0, 2**64 - 1)
suite = settings(max_examples=200, deadline=None, derandomize=True, database=None,
                 suppress_health_check=[HealthCheck.too_slow])


def check(profile, seed, shape, keys):
    inst = random_instance(profile, seed, **shape)
    assert inst.J <= 4 and inst.I <= 5 and inst.K <= 12
    res = evaluate(inst)
    for key in keys:
        assert res[key] is not False, f"({key}) {PROPERTIES[key]}"


@pytest.mark.parametrize("profile", PROFILES)
@suite
@given(seed=seeds, shape=shapes)
def test_cuts_certificates_chain_oracle_minimality_corollary(profile, seed, shape):
    check(profile, seed, shape, "abcdef")


@pytest.mark.parametrize("profile", PROFILES)
@suite
@given(seed=seeds, shape=shapes)
def test_submodular_instances_have_equal_revenues(profile, seed, shape):
    check(profile, seed, shape, "g")
