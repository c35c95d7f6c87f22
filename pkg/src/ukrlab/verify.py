"""Built-in self checks behind ``ukrlab verify``; one PASS/FAIL line each."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import adversary as adv
from .algorithms import GENERAL_ZOO, PROPORTIONAL_ZOO, make
from .bounds import check_identities, lower_bound_cN, partial_sum_S, s_infinity_bracket, sylvester
from .core import Instance, Item, replay
from .harness import SweepConfig, run_sweep
from .oracle import branch_and_bound, scaled_dp


def _check(name: str, ok: bool, results: list) -> None:
    results.append(ok)
    print(f"{'PASS' if ok else 'FAIL'}  {name}")


def _enumerate(items) -> Fraction:
    best = Fraction(0)
    ranges = [range(x.multiplicity + 1) for x in items]
    for counts in itertools.product(*ranges):
        if sum(c * x.weight for c, x in zip(counts, items)) <= 1:
            best = max(best, sum(c * x.value for c, x in zip(counts, items)))
    return best


def run_checks(quick: bool = True) -> bool:
    results: list[bool] = []
    n_sweep = 60 if quick else 500

    _check("sylvester 2,3,7,43,1807", [sylvester(i) for i in range(1, 6)] == [2, 3, 7, 43, 1807], results)
    _check("identities hold for N <= 8", all(check_identities(N).ok for N in range(1, 9)), results)
    lo, hi = s_infinity_bracket(5)
    _check("S_inf < 1.69104 (depth 5)", hi < Fraction(169104, 100000) and lo < hi, results)
    lo6, _ = s_infinity_bracket(6)
    _check("S_inf > 1.69103 (depth 6)", lo6 > Fraction(169103, 100000), results)
    c5 = lower_bound_cN(5)
    _check("c_5 > 1.5877 with residuals in tolerance", c5.c_lo > Fraction(15877, 10000) and c5.residuals_ok(), results)

    _check(
        "Focus ratio on tightness instances equals S_N, N = 1..4",
        all(
            adv.optimal(inst).optimum / replay(make("focus"), inst).gain == partial_sum_S(N)
            for N in range(1, 5)
            for inst in [adv.tightness_instance(N, Fraction(1, 10**4))]
        ),
        results,
    )
    ok = True
    for e in adv.EPS_LADDER:
        for a in PROPORTIONAL_ZOO:
            ok &= adv.proportional_det_adversary(make(a), e).ratio >= 1 / (Fraction(2, 3) + 4 * e)
    _check("proportional game forces 1/(2/3+4e) on the zoo", ok, results)
    ok = all(
        o.expected_gain <= Fraction(5, 6) + 2 * e
        for e in adv.EPS_LADDER
        for a in PROPORTIONAL_ZOO
        for o in adv.yao_experiment(make(a), e).strategies
    )
    _check("Yao mix caps every deterministic strategy at 5/6+2e", ok, results)
    ok = all(adv.general_adversary(make(a), 5, Fraction(1, 10**6), c5).ratio > Fraction(158, 100) for a in GENERAL_ZOO)
    _check("general game forces ratio > 1.58 on the zoo (N=5)", ok, results)

    for cfg, alg in (
        (SweepConfig(count=n_sweep, seed=1), "simple"),
        (SweepConfig(count=n_sweep, seed=2, weight_model="category_mix"), "randchoice"),
        (SweepConfig(count=n_sweep, seed=3, value_model="uniform_rational"), "focus"),
    ):
        rows, summary = run_sweep(cfg, [alg])
        _check(f"{alg} sweep of {n_sweep} stays within its bound", not summary.violations, results)

    rng = random.Random(7)
    ok = True
    for _ in range(40 if quick else 200):
        items = [Item(Fraction(rng.randint(1, 6), rng.choice((6, 12, 18, 24, 30, 36))), Fraction(rng.randint(0, 12), 7)) for _ in range(rng.randint(1, 4))]
        items = [x for x in items if x.weight <= 1]
        if not items:
            continue
        e = _enumerate(sorted(set(items)))
        ok &= scaled_dp(items).optimum == e == branch_and_bound(items).optimum
    _check("oracle backends agree with enumeration", ok, results)

    passed = sum(results)
    print(f"{passed}/{len(results)} checks passed")
    return all(results)
