from fractions import Fraction as F

import pytest

from ukrlab.adversary import (
    EPS_LADDER,
    game_slack,
    general_adversary,
    general_game_items,
    proportional_det_adversary,
    proportional_instances,
    tightness_bound,
    tightness_instance,
    yao_experiment,
)
from ukrlab.algorithms import GENERAL_ZOO, PROPORTIONAL_ZOO, Focus, Simple, make, randchoice
from ukrlab.bounds import lower_bound_cN, partial_sum_S, sylvester
from ukrlab.core import DomainError
from ukrlab.oracle import optimal


@pytest.fixture(scope="module")
def c5():
    return lower_bound_cN(5)


def test_proportional_instances(eps100):
    i1, i2 = proportional_instances(eps100)
    assert [x.weight for x in i1] == [F(53, 150), F(197, 300), F(103, 300)]
    assert [x.weight for x in i2][:2] == [F(53, 150), F(197, 300)]
    assert optimal(i1).optimum == optimal(i2).optimum == 1
    with pytest.raises(DomainError):
        proportional_instances(F(1, 24))


def test_det_adversary_on_simple(eps100):
    rep = proportional_det_adversary(Simple(), eps100)
    assert rep.instance_emitted == proportional_instances(eps100)[0]
    assert (rep.alg_gain, rep.opt, rep.ratio) == (F(53, 75), 1, F(75, 53))
    assert "lacks" in rep.branch_log[0]


@pytest.mark.parametrize("eps", EPS_LADDER)
@pytest.mark.parametrize("alg_id", PROPORTIONAL_ZOO)
def test_det_adversary_bound(alg_id, eps):
    rep = proportional_det_adversary(make(alg_id), eps)
    assert rep.ratio >= 1 / (F(2, 3) + 4 * eps)
    assert rep.opt == optimal(rep.instance_emitted).optimum
    assert rep.ratio == rep.opt / rep.alg_gain


def test_det_bound_monotone():
    bounds = [1 / (F(2, 3) + 4 * e) for e in EPS_LADDER]
    assert bounds == sorted(bounds) and bounds[-1] < F(3, 2)


@pytest.mark.parametrize("eps", EPS_LADDER)
def test_yao(eps):
    for alg_id in PROPORTIONAL_ZOO:
        for o in yao_experiment(make(alg_id), eps).strategies:
            assert o.expected_gain <= F(5, 6) + 2 * eps
    rep = yao_experiment(randchoice(), eps)
    assert len(rep.strategies) == 2 and rep.opt == 1


def test_yao_simple(eps100):
    rep = yao_experiment(Simple(), eps100)
    (o,) = rep.strategies
    assert o.gains == (F(53, 75), F(53, 75))
    assert o.expected_gain == F(53, 75)
    assert "OPT(I1)=1 OPT(I2)=1" in rep.branch_log[0]


def test_tightness_instances():
    inst = tightness_instance(2, F(1, 100))
    assert [(x.weight, x.value) for x in inst] == [(F(51, 100), 1), (F(103, 300), F(1, 2))]
    for N in range(1, 5):
        inst = tightness_instance(N, F(1, 10**4))
        assert all(x.cumulative_value == 1 for x in inst)
        from ukrlab.core import replay

        assert optimal(inst).optimum / replay(Focus(), inst).gain == partial_sum_S(N)
    with pytest.raises(DomainError):
        tightness_instance(3, tightness_bound(3))


def test_game_items_exclusion(c5):
    g = general_game_items(5, F(1, 10**6), c5)
    for i in range(2, 5):
        assert (1 - F(1, sylvester(i + 1)) - g.eps) + (F(1, sylvester(i)) + 2 * g.eps) > 1
    assert g.z.value == g.v[1]
    assert g.x_alt[2].value == g.v[0] / 2
    small = general_game_items(5, F(1, 10**8), c5)
    assert small.witness_feasible
    assert not g.witness_feasible


@pytest.mark.parametrize("alg_id", GENERAL_ZOO)
def test_general_game(alg_id, c5):
    rep = general_adversary(make(alg_id), 5, F(1, 10**6), c5)
    assert rep.ratio > F(158, 100)
    assert rep.opt == optimal(rep.instance_emitted).optimum
    assert rep.witness.witness.gain == rep.opt


def test_focus_n3():
    rep = general_adversary(Focus(), 3, F(1, 10**4))
    assert rep.ratio >= F(3, 2)
    assert rep.branch_log


def test_stop_branch_cap(c5):
    # keep-first never takes y_5, so it leaves at the top level
    rep = general_adversary(make("keep-first"), 5, F(1, 10**6), c5)
    assert rep.branch_log[-1].startswith("level 5")
    v = [None, *general_game_items(5, F(1, 10**6), c5).v]
    assert rep.alg_gain <= v[5]
    assert rep.opt >= v[4] + v[5] / (sylvester(5) - 1)


def test_slack_shrinks(c5):
    deltas = [game_slack(5, e, c5) for e in (*EPS_LADDER, F(1, 10**8))]
    assert all(a > b for a, b in zip(deltas, deltas[1:]))
    assert deltas[-1] < F(1, 10**6)


def test_general_domain(c5):
    with pytest.raises(DomainError):
        general_adversary(Focus(), 2, F(1, 100))
    with pytest.raises(DomainError):
        general_game_items(4, F(1, 100), c5)
