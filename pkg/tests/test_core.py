from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ukrlab.algorithms import Focus, Simple, make
from ukrlab.core import (
    EMPTY,
    DomainError,
    IllegalMove,
    Instance,
    InstanceFormatError,
    Item,
    Move,
    NotProportional,
    Solution,
    cumulative_value,
    format_instance,
    gain,
    multiplicity,
    parse_instance,
    rat,
    read_instance,
    replay,
    replay_gain,
    write_instance,
)

fractions = st.fractions(min_value=F(-50), max_value=F(50), max_denominator=10**6)
unit_weights = st.fractions(min_value=F(1, 10**4), max_value=1, max_denominator=10**4).filter(lambda w: w > 0)


def test_multiplicity_examples():
    assert multiplicity(F(1, 2)) == 2
    assert multiplicity(F(53, 150)) == 2
    assert multiplicity(F(3, 10)) == 3
    assert multiplicity(F(1)) == 1


@pytest.mark.parametrize("w", [F(0), F(-1, 3), F(3, 2)])
def test_multiplicity_domain(w):
    with pytest.raises(DomainError):
        multiplicity(w)


@given(st.integers(1, 40), st.fractions(min_value=0, max_value=1, max_denominator=10**5))
def test_multiplicity_fills_most_of_the_knapsack(n, t):
    w = F(1, n) * t
    if w == 0:
        return
    assert multiplicity(w) * w >= F(n, n + 1)


def test_cumulative_value_examples():
    assert cumulative_value(Item(F(1, 2) + F(1, 1000), F(1))) == 1
    assert cumulative_value(Item(F(3, 10), F(2, 5))) == F(6, 5)
    assert cumulative_value(Item(F(1, 7) + F(1, 1000), F(1, 6))) == 1


def test_item_invariants():
    with pytest.raises(DomainError):
        Item(F(0), F(1))
    with pytest.raises(DomainError):
        Item(F(1, 2), F(-1))
    x = Item(F(2, 5), F(1))
    assert x.density == F(5, 2)
    assert not x.is_proportional
    assert Item.proportional("2/5").is_proportional


def test_rat_refuses_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("3/9") == F(1, 3)
    assert rat(F(2, 4)).denominator == 2


@given(fractions, fractions)
def test_rat_round_trips(a, b):
    assert (a + b) - b == a
    if b != 0:
        assert (a * b) / b == a


def test_gain_examples():
    assert gain(EMPTY) == 0
    assert gain(Solution.of({Item(F(1, 2), F(1)): 2})) == 2


def test_overweight_solution_rejected():
    a, b = Item.proportional(F(53, 150)), Item.proportional(F(197, 300))
    with pytest.raises(DomainError):
        Solution.of([a, b])


def test_solution_is_canonical():
    a, b = Item.proportional(F(1, 4)), Item.proportional(F(1, 5))
    assert Solution.of([a, b, a]) == Solution.of({b: 1, a: 2})
    assert Solution.single(a).count(a) == 4


def test_proportional_flag_enforced():
    with pytest.raises(NotProportional):
        Instance((Item(F(1, 2), F(1)),), proportional=True)


def test_replay_examples():
    assert replay(Simple(), Instance.from_weights([F(3, 4), F(4, 5)])).gain == F(4, 5)
    inst = Instance((Item(F(3, 5), F(10)), Item(F(3, 10), F(4))))
    assert replay(Focus(), inst).gain == 12


class _Greedy:
    name = "overpack"
    proportional_only = False

    def reset(self):
        pass

    def step(self, item, knapsack):
        return Move(pack=3)


class _Thief:
    name = "thief"
    proportional_only = False

    def reset(self):
        pass

    def step(self, item, knapsack):
        return Move(pack=0, remove=Solution.of([Item.proportional(F(1, 9))]))


def test_illegal_moves():
    with pytest.raises(IllegalMove) as info:
        replay(_Greedy(), Instance.from_weights([F(1, 5), F(2, 5)]))
    assert info.value.step == 1
    with pytest.raises(IllegalMove):
        replay(_Thief(), Instance.from_weights([F(1, 2)]))


def test_proportional_only_algorithm_rejects_general_items():
    with pytest.raises(NotProportional):
        replay(Simple(), [Item(F(1, 2), F(1))])


items = st.builds(Item, unit_weights, st.fractions(min_value=0, max_value=3, max_denominator=50))


@given(st.lists(items, min_size=1, max_size=7), st.sampled_from(["focus", "keep-last", "greedy-density", "greedy-gain", "simple-general"]))
def test_trace_invariants(seq, alg_id):
    res = replay(make(alg_id), seq)
    assert len(res.trace) == len(seq)
    for i, step in enumerate(res.trace):
        assert step.item_index == i
        assert step.knapsack_after.weight <= 1
    assert res.gain == res.trace.final.gain
    assert replay_gain(make(alg_id), seq) == res.gain


def test_instance_file_round_trip(tmp_path):
    text = "# example\ngeneral\n3/5 10\n3/10 4  # trailing comment\n1 0\n"
    inst = parse_instance(text)
    assert [x.weight for x in inst] == [F(3, 5), F(3, 10), F(1)]
    assert parse_instance(format_instance(inst)) == inst
    p = tmp_path / "prop.txt"
    prop = Instance.from_weights([F(53, 150), F(197, 300)])
    write_instance(prop, p)
    assert read_instance(p) == prop
    assert parse_instance("proportional\n1/3\n").proportional


@pytest.mark.parametrize("text", ["", "weird\n1/2 1\n", "general\n1/2\n", "general\n0 1\n", "proportional\n1/2 1\n", "general\n1/2 x\n"])
def test_instance_file_errors(text):
    with pytest.raises((InstanceFormatError, DomainError)):
        parse_instance(text)
