from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import enumerate_optimum
from ukrlab.adversary import proportional_instances, tightness_instance
from ukrlab.algorithms import PROPORTIONAL_ZOO, make
from ukrlab.core import Instance, Item, replay
from ukrlab.oracle import (
    ResourceLimit,
    UndefinedRatio,
    branch_and_bound,
    competitive_ratio,
    optimal,
    scaled_dp,
    weight_lcm,
)

small_items = st.builds(
    Item,
    st.integers(1, 6).flatmap(lambda m: st.fractions(min_value=F(1, m + 1), max_value=F(1, m), max_denominator=60)).filter(lambda w: w > 0),
    st.fractions(min_value=0, max_value=5, max_denominator=30),
)


def test_half_item():
    res = optimal([Item(F(1, 2), F(1))])
    assert res.optimum == 2
    assert res.witness.count(Item(F(1, 2), F(1))) == 2


def test_i1_optimum(eps100):
    i1, _ = proportional_instances(eps100)
    res = optimal(i1)
    assert res.optimum == 1
    assert res.witness.gain == 1 and res.witness.weight <= 1


def test_tightness_n4_optimum():
    inst = tightness_instance(4, F(1, 10**4))
    assert optimal(inst).optimum == F(71, 42)
    assert branch_and_bound(list(inst)).optimum == F(71, 42)


def test_competitive_ratio_examples(eps100):
    assert competitive_ratio(F(3), opt=F(3)) == 1
    i1, _ = proportional_instances(eps100)
    assert competitive_ratio(replay(make("simple"), i1).gain, i1) == F(75, 53)
    inst = tightness_instance(4, F(1, 10**4))
    assert competitive_ratio(replay(make("focus"), inst).gain, inst) == F(71, 42)


def test_undefined_ratio():
    with pytest.raises(UndefinedRatio):
        competitive_ratio(F(0), opt=F(1))
    assert competitive_ratio(F(0), opt=F(0)) == 1


@given(st.lists(small_items, min_size=1, max_size=4))
def test_matches_enumeration(items):
    expected = enumerate_optimum(items)
    results = [branch_and_bound(items), optimal(items)]
    if weight_lcm(items) <= 10**6:
        results.append(scaled_dp(items))
    else:
        with pytest.raises(ResourceLimit):
            scaled_dp(items)
    for res in results:
        assert res.optimum == expected
        assert res.witness.gain == expected
        assert res.witness.weight <= 1
        assert all(x in items for x in res.witness.distinct())


@given(st.lists(small_items, min_size=1, max_size=6))
def test_dominates_cumulative_values(items):
    res = optimal(items)
    assert all(res.optimum >= x.cumulative_value for x in items)


@given(small_items)
def test_single_item_is_cumulative_value(x):
    assert optimal([x]).optimum == x.cumulative_value


@given(st.lists(st.fractions(min_value=F(1, 20), max_value=1, max_denominator=40).filter(lambda w: w > 0), min_size=1, max_size=6), st.sampled_from(PROPORTIONAL_ZOO))
def test_dominates_every_replay(ws, alg_id):
    inst = Instance.from_weights(ws)
    assert optimal(inst).optimum >= replay(make(alg_id), inst).gain


def test_backend_selection():
    coprime = [Item.proportional(F(1, p) + F(1, 10**7)) for p in (2, 3, 5)]
    assert weight_lcm(coprime) > 10**6
    assert optimal(coprime).method == "branch_and_bound"
    assert optimal([Item.proportional(F(1, 3))]).method == "scaled_dp"


def test_scaled_dp_refuses_large_denominators():
    with pytest.raises(ResourceLimit):
        scaled_dp([Item.proportional(F(1, 10**7 + 1))])


def test_node_budget():
    items = [Item(F(1, 10 + k) + F(1, 10**8 + k), F(1, 10 + k)) for k in range(12)]
    with pytest.raises(ResourceLimit):
        branch_and_bound(items, node_budget=50)


def test_bounded_counts():
    x = Item(F(1, 4), F(1))
    assert branch_and_bound([x], max_counts={x: 2}).optimum == 2
