"""Exact data model and replay engine for online unbounded knapsack with removal.

Every quantity is a :class:`fractions.Fraction`; nothing in this module rounds.
Capacity is normalised to 1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Protocol, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]

ONE = Fraction(1)
ZERO = Fraction(0)


class DomainError(ValueError):
    """A value lies outside the domain an operation accepts."""


class NotProportional(DomainError):
    """A proportional-only algorithm received an item with weight != value."""


class IllegalMove(Exception):
    """An online algorithm requested a step the model forbids."""

    def __init__(self, step: int, reason: str):
        super().__init__(f"illegal move at step {step}: {reason}")
        self.step = step
        self.reason = reason


def rat(x: RatLike) -> Fraction:
    """Parse ``p/q``, an integer, or an existing rational. Floats are refused."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass 'p/q' or a Fraction")
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def multiplicity(w: Fraction) -> int:
    """Number of copies of an item of weight ``w`` that fit at once, ``floor(1/w)``."""
    if not 0 < w <= 1:
        raise DomainError(f"weight must lie in (0, 1], got {w}")
    return math.floor(1 / Fraction(w))


@dataclass(frozen=True, order=True)
class Item:
    weight: Fraction
    value: Fraction

    def __post_init__(self):
        w, v = rat(self.weight), rat(self.value)
        if not 0 < w <= 1:
            raise DomainError(f"weight must lie in (0, 1], got {w}")
        if v < 0:
            raise DomainError(f"value must be non-negative, got {v}")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "value", v)

    @classmethod
    def proportional(cls, w: RatLike) -> "Item":
        return cls(rat(w), rat(w))

    @property
    def density(self) -> Fraction:
        return self.value / self.weight

    @property
    def multiplicity(self) -> int:
        return multiplicity(self.weight)

    @property
    def cumulative_value(self) -> Fraction:
        return self.value * self.multiplicity

    @property
    def is_proportional(self) -> bool:
        return self.weight == self.value

    def __repr__(self) -> str:
        return f"Item({format_rat(self.weight)}, {format_rat(self.value)})"


def cumulative_value(x: Item) -> Fraction:
    """Best gain obtainable from copies of ``x`` alone."""
    return x.cumulative_value


@dataclass(frozen=True)
class Instance:
    items: tuple[Item, ...]
    proportional: bool = False

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.proportional:
            for i, x in enumerate(self.items):
                if not x.is_proportional:
                    raise NotProportional(f"item {i} ({x!r}) is not proportional")

    @classmethod
    def from_weights(cls, weights: Iterable[RatLike]) -> "Instance":
        return cls(tuple(Item.proportional(w) for w in weights), proportional=True)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Item]:
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


def _canonical(counts: Mapping[Item, int]) -> tuple[tuple[Item, int], ...]:
    for x, c in counts.items():
        if not isinstance(c, int) or c < 0:
            raise DomainError(f"count for {x!r} must be a non-negative integer, got {c!r}")
    return tuple(sorted((x, c) for x, c in counts.items() if c > 0))


@dataclass(frozen=True)
class Solution:
    """Immutable multiset of packed items with total weight at most 1."""

    entries: tuple[tuple[Item, int], ...] = ()

    def __post_init__(self):
        entries = _canonical(dict(self.entries))
        object.__setattr__(self, "entries", entries)
        if self.weight > 1:
            raise DomainError(f"total weight {self.weight} exceeds capacity 1")

    @classmethod
    def of(cls, counts: Mapping[Item, int] | Iterable[Item] = ()) -> "Solution":
        if not isinstance(counts, Mapping):
            counts = Counter(counts)
        return cls(_canonical(counts))

    @classmethod
    def single(cls, x: Item) -> "Solution":
        """The multiset of as many copies of ``x`` as fit."""
        return cls(((x, x.multiplicity),))

    @property
    def weight(self) -> Fraction:
        return sum((c * x.weight for x, c in self.entries), ZERO)

    @property
    def gain(self) -> Fraction:
        return sum((c * x.value for x, c in self.entries), ZERO)

    def counts(self) -> Counter:
        return Counter(dict(self.entries))

    def count(self, x: Item) -> int:
        for y, c in self.entries:
            if y == x:
                return c
        return 0

    def distinct(self) -> tuple[Item, ...]:
        return tuple(x for x, _ in self.entries)

    def __contains__(self, x: object) -> bool:
        return any(y == x for y, _ in self.entries)

    def __len__(self) -> int:
        return sum(c for _, c in self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"{x!r}x{c}" for x, c in self.entries)
        return f"Solution({inner})"


EMPTY = Solution()


def gain(s: Solution) -> Fraction:
    return s.gain


class Move(NamedTuple):
    """What an algorithm does on one arrival: pack copies of it, then remove."""

    pack: int = 0
    remove: Mapping[Item, int] = {}


NO_MOVE = Move()


class OnlineAlgorithm(Protocol):
    name: str
    proportional_only: bool

    def reset(self) -> None: ...

    def step(self, item: Item, knapsack: Solution) -> Move: ...


def move_to(knapsack: Solution, item: Item, target: Mapping[Item, int] | Solution) -> Move:
    """The move turning ``knapsack`` into ``target`` on the arrival of ``item``.

    ``target`` may only add copies of ``item``; anything else must already be held.
    """
    if isinstance(target, Solution):
        target = target.counts()
    held = knapsack.counts()
    pack = max(0, target.get(item, 0) - held.get(item, 0))
    held[item] += pack
    remove = {x: c - target.get(x, 0) for x, c in held.items() if c > target.get(x, 0)}
    return Move(pack, remove)


@dataclass(frozen=True)
class Step:
    item_index: int
    copies_packed: int
    removed: Solution
    knapsack_after: Solution


@dataclass(frozen=True)
class Trace:
    steps: tuple[Step, ...] = ()

    @property
    def final(self) -> Solution:
        return self.steps[-1].knapsack_after if self.steps else EMPTY

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


class Session:
    """Feeds items to an algorithm one at a time and enforces legality.

    Adversaries use this directly so they can inspect the knapsack between
    arrivals; :func:`replay` is the batch form.
    """

    def __init__(self, alg: OnlineAlgorithm, keep_trace: bool = True):
        self.alg = alg
        self.keep_trace = keep_trace
        self.knapsack = EMPTY
        self.steps: list[Step] = []
        self.items: list[Item] = []
        alg.reset()

    @property
    def gain(self) -> Fraction:
        return self.knapsack.gain

    def feed(self, item: Item) -> Solution:
        index = len(self.items)
        if getattr(self.alg, "proportional_only", False) and not item.is_proportional:
            raise NotProportional(f"{self.alg.name} only accepts proportional items, got {item!r}")
        self.items.append(item)
        move = self.alg.step(item, self.knapsack)
        pack, remove = move
        if not isinstance(pack, int) or pack < 0:
            raise IllegalMove(index, f"copies to pack must be a non-negative integer, got {pack!r}")
        held = self.knapsack.counts()
        held[item] += pack
        if isinstance(remove, Solution):
            remove = remove.counts()
        for x, c in remove.items():
            if c < 0 or held.get(x, 0) < c:
                raise IllegalMove(index, f"cannot remove {c} copies of {x!r}; {held.get(x, 0)} held")
            held[x] -= c
        w = sum((c * x.weight for x, c in held.items()), ZERO)
        if w > 1:
            raise IllegalMove(index, f"knapsack weight {w} exceeds 1 after removals")
        self.knapsack = Solution.of(held)
        if self.keep_trace:
            self.steps.append(Step(index, pack, Solution.of(dict(remove)), self.knapsack))
        return self.knapsack

    def trace(self) -> Trace:
        return Trace(tuple(self.steps))


class ReplayResult(NamedTuple):
    gain: Fraction
    trace: Trace


def replay(alg: OnlineAlgorithm, inst: Instance | Sequence[Item], keep_trace: bool = True) -> ReplayResult:
    """Run ``alg`` over ``inst`` from a fresh state.

    Each step packs the requested copies of the arriving item and then applies the
    requested removals; only the post-removal knapsack must respect capacity.
    """
    session = Session(alg, keep_trace=keep_trace)
    for x in inst:
        session.feed(x)
    return ReplayResult(session.gain, session.trace())


def replay_gain(alg: OnlineAlgorithm, inst: Instance | Sequence[Item]) -> Fraction:
    return replay(alg, inst, keep_trace=False).gain


# -- instance files -----------------------------------------------------------


class InstanceFormatError(ValueError):
    pass


def parse_instance(text: str) -> Instance:
    header = None
    items: list[Item] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            if line not in ("proportional", "general"):
                raise InstanceFormatError(f"line {lineno}: expected 'proportional' or 'general', got {line!r}")
            header = line
            continue
        fields = line.split()
        try:
            if len(fields) == 1 and header == "proportional":
                items.append(Item.proportional(fields[0]))
            elif len(fields) == 2:
                items.append(Item(rat(fields[0]), rat(fields[1])))
            else:
                raise InstanceFormatError(f"line {lineno}: expected '<weight> <value>'")
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InstanceFormatError):
                raise
            raise InstanceFormatError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise InstanceFormatError("missing header line")
    try:
        return Instance(tuple(items), proportional=header == "proportional")
    except DomainError as exc:
        raise InstanceFormatError(str(exc)) from exc


def format_instance(inst: Instance) -> str:
    lines = ["proportional" if inst.proportional else "general"]
    for x in inst:
        if inst.proportional:
            lines.append(format_rat(x.weight))
        else:
            lines.append(f"{format_rat(x.weight)} {format_rat(x.value)}")
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_instance(inst))
