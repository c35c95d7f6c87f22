"""Exact offline optimum for unbounded knapsack with rational weights, capacity 1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import Instance, Item, Solution, ZERO

DP_LIMIT = 10**6
NODE_BUDGET = 10**7
_INT64_SAFE = 2**62


class ResourceLimit(RuntimeError):
    """The exact solver ran out of its configured budget."""


class UndefinedRatio(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: Fraction
    witness: Solution
    method: str  # "scaled_dp" or "branch_and_bound"


def _distinct(items: Iterable[Item]) -> list[Item]:
    return sorted(set(items))


def weight_lcm(items: Iterable[Item]) -> int:
    return math.lcm(1, *(x.weight.denominator for x in items))


def scaled_dp(items: Sequence[Item], limit: int = DP_LIMIT) -> OracleResult:
    """Unbounded knapsack DP over integer capacities ``0..D``, ``D`` the weight LCM."""
    items = [x for x in _distinct(items) if x.value > 0]
    if not items:
        return OracleResult(ZERO, Solution(), "scaled_dp")
    D = weight_lcm(items)
    if D > limit:
        raise ResourceLimit(f"weight LCM {D} exceeds DP limit {limit}")
    V = math.lcm(*(x.value.denominator for x in items))
    ws = [int(x.weight * D) for x in items]
    vs = [int(x.value * V) for x in items]
    g = math.gcd(*ws)
    ws = [w // g for w in ws]
    cap = D // g
    top = max(x.density for x in items) * V + max(vs)
    if top < _INT64_SAFE:
        best = np.zeros(cap + 1, dtype=np.int64)
        for w, v in zip(ws, vs):
            # binary splitting: 0/1 passes with 1, 2, 4, ... copies reach every count up to cap // w
            k = 1
            while k * w <= cap:
                shifted = best[: cap + 1 - k * w] + k * v
                np.maximum(best[k * w:], shifted, out=best[k * w:])
                k *= 2
        table = best.tolist()
    else:
        table = [0] * (cap + 1)
        for w, v in zip(ws, vs):
            for c in range(w, cap + 1):
                cand = table[c - w] + v
                if cand > table[c]:
                    table[c] = cand
    counts = [0] * len(items)
    c = cap
    while table[c] > 0:
        for i, (w, v) in enumerate(zip(ws, vs)):
            if w <= c and table[c - w] + v == table[c]:
                counts[i] += 1
                c -= w
                break
        else:
            c -= 1
    witness = Solution.of({x: k for x, k in zip(items, counts)})
    return OracleResult(Fraction(table[cap], V), witness, "scaled_dp")


def branch_and_bound(
    items: Sequence[Item],
    node_budget: int = NODE_BUDGET,
    max_counts: Mapping[Item, int] | None = None,
    capacity: Fraction = Fraction(1),
) -> OracleResult:
    """Depth-first search over items by decreasing density with the fractional bound.

    ``max_counts`` caps individual items, which turns this into a bounded
    knapsack; absent items are unbounded.
    """
    pool = [x for x in _distinct(items) if x.value > 0]
    if max_counts is not None:
        pool = [x for x in pool if max_counts.get(x, math.inf) > 0]
    pool.sort(key=lambda x: (-x.density, x.weight))
    n = len(pool)
    caps = [max_counts.get(x, math.inf) if max_counts else math.inf for x in pool]
    dens = [x.density for x in pool]

    best_value = ZERO
    best_counts = [0] * n
    counts = [0] * n
    nodes = 0

    def dfs(k: int, room: Fraction, value: Fraction) -> None:
        nonlocal best_value, best_counts, nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimit(f"branch and bound exceeded {node_budget} nodes")
        if value > best_value:
            best_value = value
            best_counts = counts.copy()
        if k == n or value + room * dens[k] <= best_value:
            return
        x = pool[k]
        top = min(math.floor(room / x.weight), caps[k])
        for c in range(top, -1, -1):
            r = room - c * x.weight
            v = value + c * x.value
            if k + 1 < n and v + r * dens[k + 1] <= best_value:
                # the bound only drops as c decreases
                break
            counts[k] = c
            dfs(k + 1, r, v)
        counts[k] = 0

    dfs(0, Fraction(capacity), ZERO)
    witness = Solution.of({x: c for x, c in zip(pool, best_counts)})
    return OracleResult(best_value, witness, "branch_and_bound")


def optimal(inst: Instance | Sequence[Item], dp_limit: int = DP_LIMIT, node_budget: int = NODE_BUDGET) -> OracleResult:
    """Exact optimum: scaled DP when the weight LCM is at most ``dp_limit``, else B&B."""
    items = list(inst)
    if weight_lcm(items) <= dp_limit:
        return scaled_dp(items, dp_limit)
    return branch_and_bound(items, node_budget)


def competitive_ratio(alg_gain: Fraction, inst: Instance | Sequence[Item] | None = None, opt: Fraction | None = None) -> Fraction:
    """``OPT / alg_gain``; 1 when both vanish."""
    if opt is None:
        opt = optimal(inst).optimum
    if alg_gain == 0:
        if opt == 0:
            return Fraction(1)
        raise UndefinedRatio(f"algorithm gained 0 while OPT = {opt}")
    return Fraction(opt) / alg_gain
