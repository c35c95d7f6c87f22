"""Online algorithms: Simple, Focus, the two RandChoice strategies, and baselines.

All algorithms share the :class:`~ukrlab.core.OnlineAlgorithm` protocol. Each
one decides on a target knapsack and lets :func:`~ukrlab.core.move_to` derive
the pack/remove move.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import (
    EMPTY,
    NO_MOVE,
    Instance,
    Item,
    Move,
    OnlineAlgorithm,
    Solution,
    move_to,
    replay,
)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


class Size(enum.Enum):
    G = "G"
    S = "S"
    M = "M"
    L = "L"


def size_category(w: Fraction) -> Size:
    """RandChoice size class. 5/8 is medium."""
    if w <= THIRD or Fraction(3, 8) <= w <= HALF or w >= Fraction(3, 4):
        return Size.G
    if w < Fraction(3, 8):
        return Size.S
    if w <= Fraction(5, 8):
        return Size.M
    return Size.L


class _Base:
    name = "base"
    proportional_only = False

    def __init__(self):
        self.reset()

    def reset(self) -> None:
        self.halted = False

    def __repr__(self) -> str:
        return f"<{self.name}>"


class Simple(_Base):
    """Keep the heaviest item until one of weight <= 1/2 shows up; then fill with it and stop."""

    name = "simple"
    proportional_only = True

    def step(self, x: Item, knapsack: Solution) -> Move:
        if self.halted:
            return NO_MOVE
        if x.weight <= HALF:
            self.halted = True
            return move_to(knapsack, x, Solution.single(x))
        if not knapsack:
            return move_to(knapsack, x, {x: 1})
        (held,) = knapsack.distinct()
        if x.weight > held.weight:
            return move_to(knapsack, x, {x: 1})
        return NO_MOVE


class SimpleGeneral(Simple):
    """Simple's weight rule applied to general items (a baseline, no guarantee)."""

    name = "simple-general"
    proportional_only = False


class Focus(_Base):
    """Hold as many copies as fit of the first item with maximal cumulative value."""

    name = "focus"

    def step(self, x: Item, knapsack: Solution) -> Move:
        if not knapsack:
            return move_to(knapsack, x, Solution.single(x))
        held = knapsack.distinct()[0]
        if x.cumulative_value > held.cumulative_value:
            return move_to(knapsack, x, Solution.single(x))
        return NO_MOVE


class _RandChoiceBranch(_Base):
    proportional_only = True

    def reset(self) -> None:
        super().reset()
        self.pair: tuple[Item, Item] | None = None  # (small, big)

    def step(self, x: Item, knapsack: Solution) -> Move:
        if self.halted:
            return NO_MOVE
        cat = size_category(x.weight)
        if cat is Size.G:
            self.halted = True
            self.pair = None
            return move_to(knapsack, x, Solution.single(x))
        if not knapsack:
            return move_to(knapsack, x, Solution.single(x))
        if self.pair is None:
            (held,) = knapsack.distinct()
            target = self.single_state(x, held)
        else:
            target = self.pair_state(x, *self.pair)
        if target is None:
            return NO_MOVE
        return move_to(knapsack, x, target)

    def _make_pair(self, x: Item, held: Item) -> dict:
        s, b = (x, held) if size_category(x.weight) is Size.S else (held, x)
        self.pair = (s, b)
        return {s: 1, b: 1} if s != b else {s: 2}

    def pair_state(self, x: Item, s: Item, b: Item):
        return None


class RandChoiceA1(_RandChoiceBranch):
    """First branch: priorities smallest S (twice), largest M, smallest L; then S+(M or L) pairs."""

    name = "randchoice:a1"

    def single_state(self, x: Item, held: Item):
        cx, ch = size_category(x.weight), size_category(held.weight)
        big = (Size.M, Size.L)
        if ((ch in big and cx is Size.S) or (ch is Size.S and cx in big)) and x.weight + held.weight <= 1:
            return self._make_pair(x, held)
        if cx is Size.S and x.weight < held.weight:
            return Solution.single(x)
        if cx is Size.M and ch is Size.M:
            return {x: 1} if x.weight > held.weight else None
        if x.weight < held.weight:
            return {x: 1}
        return None

    def pair_state(self, x: Item, s: Item, b: Item):
        if x.weight < s.weight:
            self.pair = (x, b)
            return {x: 1, b: 1}
        if x.weight > b.weight and x.weight + s.weight <= 1:
            self.pair = (s, x)
            return {s: 1, x: 1}
        return None


class RandChoiceA2(_RandChoiceBranch):
    """Second branch: priorities smallest L, smallest S (twice), largest M; first S+L pair freezes."""

    name = "randchoice:a2"

    def single_state(self, x: Item, held: Item):
        cx, ch = size_category(x.weight), size_category(held.weight)
        if ((ch is Size.L and cx is Size.S) or (ch is Size.S and cx is Size.L)) and x.weight + held.weight <= 1:
            return self._make_pair(x, held)
        if cx is Size.L and (ch is not Size.L or x.weight < held.weight):
            return {x: 1}
        if cx is Size.S and ch in (Size.M, Size.S) and x.weight < held.weight:
            return Solution.single(x)
        if cx is Size.M and ch is Size.M and x.weight > held.weight:
            return {x: 1}
        return None


# -- baselines -----------------------------------------------------------------


class KeepFirst(_Base):
    """Fill with the first item and never change."""

    name = "keep-first"

    def step(self, x, knapsack):
        if knapsack:
            return NO_MOVE
        return move_to(knapsack, x, Solution.single(x))


class KeepLast(_Base):
    name = "keep-last"

    def step(self, x, knapsack):
        return move_to(knapsack, x, Solution.single(x))


class GreedyDensity(_Base):
    """Refill greedily by density from the held items plus unlimited copies of the arrival."""

    name = "greedy-density"

    def step(self, x, knapsack):
        pool = knapsack.counts()
        pool[x] = x.multiplicity
        room = Fraction(1)
        target = {}
        for y in sorted(pool, key=lambda y: (-y.density, y.weight)):
            k = min(pool[y], int(room // y.weight))
            if k:
                target[y] = k
                room -= k * y.weight
        if sum(k * y.value for y, k in target.items()) <= knapsack.gain:
            return NO_MOVE
        return move_to(knapsack, x, target)


class GreedyGain(_Base):
    """Switch to the best knapsack reachable right now whenever it strictly improves the gain."""

    name = "greedy-gain"

    def step(self, x, knapsack):
        from .oracle import branch_and_bound

        caps = dict(knapsack.counts())
        caps[x] = caps.get(x, 0) + x.multiplicity
        res = branch_and_bound(list(caps), max_counts=caps)
        if res.optimum <= knapsack.gain:
            return NO_MOVE
        return move_to(knapsack, x, res.witness)


# -- mixtures ------------------------------------------------------------------


@dataclass(frozen=True)
class MixedStrategy:
    """A randomized algorithm as a finite distribution over deterministic ones."""

    name: str
    strategies: tuple[tuple[Callable[[], OnlineAlgorithm], Fraction], ...]

    def __post_init__(self):
        total = sum((p for _, p in self.strategies), Fraction(0))
        if total != 1 or any(p < 0 for _, p in self.strategies):
            raise ValueError(f"probabilities must be non-negative and sum to 1, got {total}")

    def expected_gain(self, inst: Instance | Sequence[Item]) -> Fraction:
        return expected_gain(self, inst)

    def sample(self, rng: random.Random) -> OnlineAlgorithm:
        """Draw one deterministic strategy; for demonstration runs only."""
        r = Fraction(rng.random())
        acc = Fraction(0)
        for make, p in self.strategies:
            acc += p
            if r < acc:
                return make()
        return self.strategies[-1][0]()


def expected_gain(m: MixedStrategy | OnlineAlgorithm, inst: Instance | Sequence[Item]) -> Fraction:
    if not isinstance(m, MixedStrategy):
        return replay(m, inst).gain
    return sum((p * replay(make(), inst).gain for make, p in m.strategies), Fraction(0))


def simple() -> Simple:
    return Simple()


def focus() -> Focus:
    return Focus()


def randchoice_strategy(which: str) -> OnlineAlgorithm:
    which = which.lower()
    if which == "a1":
        return RandChoiceA1()
    if which == "a2":
        return RandChoiceA2()
    raise ValueError(f"unknown RandChoice branch {which!r}")


def randchoice() -> MixedStrategy:
    return MixedStrategy("randchoice", ((RandChoiceA1, HALF), (RandChoiceA2, HALF)))


REGISTRY: dict[str, Callable[[], OnlineAlgorithm | MixedStrategy]] = {
    "simple": Simple,
    "focus": Focus,
    "randchoice": randchoice,
    "randchoice:a1": RandChoiceA1,
    "randchoice:a2": RandChoiceA2,
    "simple-general": SimpleGeneral,
    "keep-first": KeepFirst,
    "keep-last": KeepLast,
    "greedy-density": GreedyDensity,
    "greedy-gain": GreedyGain,
}

PROPORTIONAL_ZOO = ("simple", "focus", "randchoice:a1", "randchoice:a2", "keep-first", "keep-last", "greedy-density", "greedy-gain")
GENERAL_ZOO = ("simple-general", "focus", "greedy-density", "greedy-gain", "keep-first", "keep-last")


def make(alg_id: str) -> OnlineAlgorithm | MixedStrategy:
    try:
        return REGISTRY[alg_id]()
    except KeyError:
        raise ValueError(f"unknown algorithm {alg_id!r}; known: {', '.join(REGISTRY)}") from None


def is_proportional_only(alg_id: str) -> bool:
    a = make(alg_id)
    if isinstance(a, MixedStrategy):
        return any(getattr(f(), "proportional_only", False) for f, _ in a.strategies)
    return a.proportional_only


def deterministic_strategies(m: MixedStrategy | OnlineAlgorithm) -> list[tuple[OnlineAlgorithm, Fraction]]:
    if isinstance(m, MixedStrategy):
        return [(f(), p) for f, p in m.strategies]
    return [(m, Fraction(1))]
