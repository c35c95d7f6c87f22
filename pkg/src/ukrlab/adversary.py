"""Adaptive lower-bound games played against online algorithms.

A game emits items one at a time, looks at what the algorithm holds, and picks
the continuation. The reported OPT always comes from the oracle on the items
actually emitted; the game's own reasoning is never trusted for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algorithms import MixedStrategy, deterministic_strategies
from .bounds import LowerBoundSolution, lower_bound_cN, sylvester
from .core import DomainError, Instance, Item, OnlineAlgorithm, Session, replay
from .oracle import OracleResult, competitive_ratio, optimal

EPS_LADDER = (Fraction(1, 10**2), Fraction(1, 10**4), Fraction(1, 10**6))
VALUE_DENOMINATOR = 10**12


@dataclass(frozen=True)
class StrategyOutcome:
    name: str
    probability: Fraction
    gains: tuple[Fraction, ...]
    expected_gain: Fraction

    @property
    def yao_bound(self) -> Fraction:
        return 1 / self.expected_gain


@dataclass
class AdversaryReport:
    instance_emitted: Instance
    alg_gain: Fraction
    opt: Fraction
    ratio: Fraction
    branch_log: list[str] = field(default_factory=list)
    witness: OracleResult | None = None
    strategies: tuple[StrategyOutcome, ...] = ()

    def summary(self) -> str:
        lines = [
            f"items    {len(self.instance_emitted)}",
            f"gain     {self.alg_gain}",
            f"opt      {self.opt}",
            f"ratio    {self.ratio}  (~{float(self.ratio):.6f})",
        ]
        lines += [f"branch   {b}" for b in self.branch_log]
        for s in self.strategies:
            lines.append(f"strategy {s.name} p={s.probability} E[gain]={s.expected_gain} yao={float(s.yao_bound):.6f}")
        return "\n".join(lines)


def _report(items: Sequence[Item], gain: Fraction, log: list[str], proportional: bool) -> AdversaryReport:
    inst = Instance(tuple(items), proportional=proportional)
    res = optimal(inst)
    return AdversaryReport(inst, gain, res.optimum, competitive_ratio(gain, opt=res.optimum), log, res)


def _check_small_eps(eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 24):
        raise DomainError(f"eps must lie in (0, 1/24), got {eps}")
    return eps


def proportional_instances(eps: Fraction) -> tuple[Instance, Instance]:
    """The two proportional instances sharing the prefix (1/3+2e, 2/3-e)."""
    eps = _check_small_eps(eps)
    t = Fraction(1, 3)
    head = (t + 2 * eps, 2 * t - eps)
    return (
        Instance.from_weights((*head, t + eps)),
        Instance.from_weights((*head, 2 * t - 2 * eps)),
    )


def proportional_det_adversary(alg: OnlineAlgorithm, eps: Fraction) -> AdversaryReport:
    """Play the common prefix, then pick whichever tail hurts the algorithm."""
    i1, i2 = proportional_instances(eps)
    session = Session(alg)
    for x in i1.items[:2]:
        session.feed(x)
    big = i1.items[1]
    if big in session.knapsack:
        tail, label = i2.items[2], "holds 2/3-e: tail 2/3-2e"
    else:
        tail, label = i1.items[2], "lacks 2/3-e: tail 1/3+e"
    session.feed(tail)
    return _report(session.items, session.gain, [label], proportional=True)


def yao_experiment(strategies: MixedStrategy | OnlineAlgorithm, eps: Fraction) -> AdversaryReport:
    """Expected gain of each deterministic strategy on the uniform mix of both instances."""
    i1, i2 = proportional_instances(eps)
    opts = (optimal(i1).optimum, optimal(i2).optimum)
    expected_opt = sum(opts, Fraction(0)) / 2
    outcomes = []
    for alg, p in deterministic_strategies(strategies):
        gains = (replay(alg, i1).gain, replay(alg, i2).gain)
        outcomes.append(StrategyOutcome(alg.name, p, gains, sum(gains, Fraction(0)) / 2))
    mixed = sum((o.probability * o.expected_gain for o in outcomes), Fraction(0))
    log = [f"OPT(I1)={opts[0]} OPT(I2)={opts[1]}"]
    return AdversaryReport(
        i1,
        mixed,
        expected_opt,
        competitive_ratio(mixed, opt=expected_opt),
        log,
        None,
        tuple(outcomes),
    )


def tightness_bound(N: int) -> Fraction:
    return Fraction(1, N * (sylvester(N + 1) - 1))


def tightness_instance(N: int, eps: Fraction) -> Instance:
    """Items ``(1/a_i + e, 1/(a_i - 1))``, i = 1..N; each has cumulative value exactly 1."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    eps = Fraction(eps)
    if not 0 < eps < tightness_bound(N):
        raise DomainError(f"eps must lie in (0, {tightness_bound(N)}), got {eps}")
    items = []
    for i in range(1, N + 1):
        a = sylvester(i)
        items.append(Item(Fraction(1, a) + eps, Fraction(1, a - 1)))
    return Instance(tuple(items))


# -- general game -----------------------------------------------------------------


def round_value(x: Fraction, denominator: int = VALUE_DENOMINATOR) -> Fraction:
    return Fraction(round(x * denominator), denominator)


@dataclass(frozen=True)
class GameItems:
    N: int
    eps: Fraction
    v: tuple[Fraction, ...]  # rounded v_1..v_N
    x: dict  # level -> item, levels 2..N
    y: dict
    x_alt: dict
    z: Item

    @property
    def witness_feasible(self) -> bool:
        """Whether z plus one copy of every x_i fits (the eps-dependent part of the game)."""
        return self.z.weight + sum((it.weight for it in self.x.values()), Fraction(0)) <= 1


def general_game_items(N: int, eps: Fraction, lbs: LowerBoundSolution) -> GameItems:
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if lbs.N != N:
        raise DomainError(f"lower-bound solution is for N={lbs.N}, not {N}")
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 12):
        raise DomainError(f"eps must lie in (0, 1/12), got {eps}")
    v = (None, *(round_value(t) for t in lbs.v))
    x, y, x_alt = {}, {}, {}
    for i in range(2, N + 1):
        a = sylvester(i)
        share = v[i] / (a - 1) if i > 2 else v[1] / 2
        x[i] = Item(Fraction(1, a) + 2 * eps, share)
        x_alt[i] = Item(Fraction(1, a) + eps, share)
        y[i] = Item(1 - Fraction(1, a) - eps, v[i - 1] if i > 2 else v[2])
    for i in range(2, N):
        # holding y_{i+1} excludes every copy of x_i
        if y[i + 1].weight + x[i].weight <= 1:
            raise DomainError(f"level {i}: y_{i + 1} and x_{i} fit together")
    z = Item(Fraction(1, 2) + eps, v[2])
    return GameItems(N, eps, tuple(v[1:]), x, y, x_alt, z)


def general_adversary(
    alg: OnlineAlgorithm,
    N: int,
    eps: Fraction,
    lbs: LowerBoundSolution | None = None,
) -> AdversaryReport:
    """Play the general game tree for levels N..3, then the x_2 / y_2 / z endgame."""
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if lbs is None:
        lbs = lower_bound_cN(N)
    g = general_game_items(N, eps, lbs)
    s = Session(alg)
    log: list[str] = []
    if not g.witness_feasible:
        log.append("note: eps too large for the full z+x_2..x_N witness; OPT is taken from the oracle")

    def finish(label: str, bound: Fraction | None) -> AdversaryReport:
        log.append(label)
        if bound is not None and s.gain > bound:
            log.append(f"note: gain {s.gain} exceeds the game's nominal cap {bound}")
        return _report(s.items, s.gain, log, proportional=False)

    for i in range(N, 2, -1):
        s.feed(g.x[i])
        s.feed(g.y[i])
        if g.y[i] not in s.knapsack:
            s.feed(g.x_alt[i])
            return finish(f"level {i}: y_{i} not held -> x'_{i}", g.v[i - 1])
        log.append(f"level {i}: y_{i} held")
    s.feed(g.x[2])
    if g.x[2] not in s.knapsack:
        s.feed(g.z)
        return finish("x_2 not held -> z", g.v[1])
    log.append("x_2 held")
    s.feed(g.y[2])
    if g.y[2] not in s.knapsack:
        s.feed(g.x_alt[2])
        return finish("y_2 not held -> x'_2", g.v[0])
    s.feed(g.z)
    return finish("y_2 held -> z", g.v[1])


def game_guarantee(g: GameItems) -> Fraction:
    """Smallest ratio the game forces at any leaf, assuming the algorithm stays within each leaf's cap.

    Each leaf pairs the largest witness that actually fits at this eps with the
    best gain the proof allows there. ``c_N - game_guarantee`` is the slack
    attributable to eps and to rounding the values.
    """
    v = (None, *g.v)
    ratios = []
    for i in range(3, g.N + 1):
        ratios.append((g.y[i].value + g.x_alt[i].value) / v[i])
    ratios.append((g.y[2].value + g.x_alt[2].value) / v[1])
    room = 1 - g.z.weight
    z_opt = g.z.value
    for i in range(2, g.N + 1):
        if g.x[i].weight > room:
            break
        room -= g.x[i].weight
        z_opt += g.x[i].value
    ratios.append(z_opt / v[2])
    return min(ratios)


def game_slack(N: int, eps: Fraction, lbs: LowerBoundSolution) -> Fraction:
    """``delta(eps)``: how far below c_N the game's forced ratio may sit."""
    return max(lbs.c_hi - game_guarantee(general_game_items(N, eps, lbs)), Fraction(0))
