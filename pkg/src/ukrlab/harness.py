"""Seeded random sweeps, ratio measurement and CSV output."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction

import numpy as np

from .algorithms import MixedStrategy, expected_gain, is_proportional_only, make
from .bounds import sylvester, t_value
from .core import Instance, Item, format_rat, rat
from .oracle import ResourceLimit, competitive_ratio, optimal

THREADS_ENV = "UKRLAB_THREADS"

CSV_COLUMNS = ("instance_id", "algorithm", "gain", "opt", "ratio", "bound", "margin", "skipped", "ratio_decimal")

WEIGHT_MODELS = ("uniform_rational", "category_mix", "sylvester_adjacent")
VALUE_MODELS = ("proportional", "uniform_rational", "density_bounded")

# category -> inclusive numerator bounds as functions of the grid denominator
_CATEGORY_ORDER = ("G", "S", "M", "L")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    count: int = 500
    items_min: int = 1
    items_max: int = 8
    weight_model: str = "uniform_rational"
    max_denominator: int = 360
    category_weights: tuple[int, int, int, int] = (1, 1, 1, 1)
    eps: Fraction = Fraction(1, 360)
    sylvester_depth: int = 4
    value_model: str = "proportional"
    rho_max: Fraction = Fraction(2)
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ConfigError("count must be non-negative")
        if not 1 <= self.items_min <= self.items_max:
            raise ConfigError(f"empty item range [{self.items_min}, {self.items_max}]")
        if self.weight_model not in WEIGHT_MODELS:
            raise ConfigError(f"unknown weight model {self.weight_model!r}")
        if self.value_model not in VALUE_MODELS:
            raise ConfigError(f"unknown value model {self.value_model!r}")
        if self.max_denominator < 8:
            raise ConfigError("max_denominator must be at least 8")
        if len(self.category_weights) != 4 or min(self.category_weights) < 0 or sum(self.category_weights) == 0:
            raise ConfigError("category_weights needs four non-negative entries, not all zero")
        if self.rho_max <= 0 or self.eps <= 0:
            raise ConfigError("rho_max and eps must be positive")
        if not 1 <= self.sylvester_depth <= 6:
            raise ConfigError("sylvester_depth must be in 1..6")

    @property
    def proportional(self) -> bool:
        return self.value_model == "proportional"


def _category_ranges(q: int) -> dict[str, list[tuple[int, int]]]:
    """Inclusive numerator ranges ``k`` with ``k/q`` in each category."""

    def first_above(num, den):  # smallest k with k/q > num/den
        return (num * q) // den + 1

    def first_at_least(num, den):
        return -((-num * q) // den)

    def last_below(num, den):
        return first_at_least(num, den) - 1

    def last_at_most(num, den):
        return (num * q) // den

    return {
        "G": [(1, last_at_most(1, 3)), (first_at_least(3, 8), last_at_most(1, 2)), (first_at_least(3, 4), q)],
        "S": [(first_above(1, 3), last_below(3, 8))],
        "M": [(first_above(1, 2), last_at_most(5, 8))],
        "L": [(first_above(5, 8), last_below(3, 4))],
    }


def _pick_numerator(rng: np.random.Generator, ranges: list[tuple[int, int]]) -> int:
    ranges = [(a, b) for a, b in ranges if a <= b]
    sizes = [b - a + 1 for a, b in ranges]
    if not ranges:
        raise ConfigError("empty weight category for this denominator")
    k = int(rng.integers(sum(sizes)))
    for (a, _), n in zip(ranges, sizes):
        if k < n:
            return a + k
        k -= n
    raise AssertionError


def _weight(cfg: SweepConfig, rng: np.random.Generator) -> Fraction:
    q = cfg.max_denominator
    if cfg.weight_model == "uniform_rational":
        return Fraction(int(rng.integers(1, q + 1)), q)
    if cfg.weight_model == "category_mix":
        w = np.asarray(cfg.category_weights, dtype=float)
        cat = _CATEGORY_ORDER[int(rng.choice(4, p=w / w.sum()))]
        return Fraction(_pick_numerator(rng, _category_ranges(q)[cat]), q)
    a = sylvester(int(rng.integers(1, cfg.sylvester_depth + 1)))
    shift = int(rng.integers(-2, 4))
    w = Fraction(1, a) + shift * cfg.eps
    return min(max(w, cfg.eps), Fraction(1))


def _value(cfg: SweepConfig, rng: np.random.Generator, w: Fraction) -> Fraction:
    q = cfg.max_denominator
    if cfg.value_model == "proportional":
        return w
    if cfg.value_model == "uniform_rational":
        return Fraction(int(rng.integers(1, q + 1)), q)
    rho = cfg.rho_max * Fraction(int(rng.integers(1, q + 1)), q)
    return w * rho


def generate_random_instance(cfg: SweepConfig, index: int) -> Instance:
    """Deterministic in ``(cfg, index)``; each index gets its own child seed."""
    rng = np.random.default_rng([cfg.seed & (2**64 - 1), index])
    n = int(rng.integers(cfg.items_min, cfg.items_max + 1))
    items = []
    for _ in range(n):
        w = _weight(cfg, rng)
        items.append(Item(w, _value(cfg, rng, w)))
    return Instance(tuple(items), proportional=cfg.proportional)


@dataclass(frozen=True)
class ExperimentRow:
    instance_id: int
    algorithm_id: str
    alg_gain: Fraction | None
    opt: Fraction | None
    ratio: Fraction | None
    bound: Fraction | None
    bound_margin: Fraction | None
    skipped: bool = False


def applicable_bound(alg_id: str) -> Fraction | None:
    if alg_id == "simple":
        return Fraction(3, 2)
    if alg_id == "randchoice":
        return Fraction(4, 3)
    if alg_id == "focus":
        return t_value(6)
    return None


def measure(alg_id: str, inst: Instance, instance_id: int = 0) -> ExperimentRow:
    bound = applicable_bound(alg_id)
    try:
        opt = optimal(inst).optimum
    except ResourceLimit:
        return ExperimentRow(instance_id, alg_id, None, None, None, bound, None, True)
    g = expected_gain(make(alg_id), inst)
    ratio = competitive_ratio(g, opt=opt)
    margin = None if bound is None else bound - ratio
    return ExperimentRow(instance_id, alg_id, g, opt, ratio, bound, margin)


@dataclass
class SweepSummary:
    rows: int = 0
    skipped: int = 0
    max_ratio: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def text(self) -> str:
        lines = [f"rows {self.rows}  skipped {self.skipped}  violations {len(self.violations)}"]
        for alg, r in self.max_ratio.items():
            lines.append(f"  {alg:16s} max ratio {format_rat(r)} (~{float(r):.6f})")
        for row in self.violations:
            lines.append(f"  VIOLATION instance {row.instance_id} {row.algorithm_id} ratio {row.ratio}")
        return "\n".join(lines)


def _rows_for_index(args) -> list[ExperimentRow]:
    cfg, algs, index = args
    inst = generate_random_instance(cfg, index)
    return [measure(a, inst, index) for a in algs]


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_sweep(cfg: SweepConfig, algorithms: list[str], threads: int | None = None) -> tuple[list[ExperimentRow], SweepSummary]:
    """Rows come out ordered by instance index, then by the order of ``algorithms``."""
    for a in algorithms:
        make(a)
        if is_proportional_only(a) and not cfg.proportional:
            raise ConfigError(f"{a} needs proportional instances; value_model is {cfg.value_model}")
    rows: list[ExperimentRow] = []
    if algorithms:
        jobs = [(cfg, tuple(algorithms), i) for i in range(cfg.count)]
        threads = default_threads() if threads is None else threads
        if threads > 1:
            with ProcessPoolExecutor(threads) as ex:
                for chunk in ex.map(_rows_for_index, jobs, chunksize=16):
                    rows.extend(chunk)
        else:
            for job in jobs:
                rows.extend(_rows_for_index(job))
    return rows, summarize(rows)


def summarize(rows: list[ExperimentRow]) -> SweepSummary:
    s = SweepSummary(rows=len(rows))
    for r in rows:
        if r.skipped:
            s.skipped += 1
            continue
        if r.algorithm_id not in s.max_ratio or r.ratio > s.max_ratio[r.algorithm_id]:
            s.max_ratio[r.algorithm_id] = r.ratio
        if r.bound_margin is not None and r.bound_margin < 0:
            s.violations.append(r)
    return s


# -- CSV ------------------------------------------------------------------------

_DEC = Context(prec=20, rounding=ROUND_HALF_EVEN)


def decimal_str(x: Fraction) -> str:
    return str(_DEC.divide(Decimal(x.numerator), Decimal(x.denominator)))


def _cell(x: Fraction | None) -> str:
    return "" if x is None else format_rat(x)


def rows_to_csv(rows: list[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            r.instance_id,
            r.algorithm_id,
            _cell(r.alg_gain),
            _cell(r.opt),
            _cell(r.ratio),
            _cell(r.bound),
            _cell(r.bound_margin),
            int(r.skipped),
            "" if r.ratio is None else decimal_str(r.ratio),
        ])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ExperimentRow]:
    def cell(s: str):
        return rat(s) if s else None

    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append(ExperimentRow(
            int(rec["instance_id"]),
            rec["algorithm"],
            cell(rec["gain"]),
            cell(rec["opt"]),
            cell(rec["ratio"]),
            cell(rec["bound"]),
            cell(rec["margin"]),
            rec["skipped"] == "1",
        ))
    return out


# -- config files -----------------------------------------------------------------


def _parse_field(name: str, raw: str):
    raw = raw.strip()
    if name in ("count", "items_min", "items_max", "max_denominator", "seed", "sylvester_depth"):
        return int(raw)
    if name in ("eps", "rho_max"):
        return rat(raw)
    if name == "category_weights":
        parts = tuple(int(p) for p in raw.replace(",", " ").split())
        return parts
    return raw


CONFIG_KEYS = {f.name for f in fields(SweepConfig)}


def parse_config(text: str) -> tuple[dict, list[str]]:
    """Flat ``key = value`` lines; returns (SweepConfig overrides, algorithm ids)."""
    values: dict = {}
    algorithms: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key in ("algorithms", "alg"):
            algorithms = [a for a in val.replace(",", " ").split() if a]
        elif key in CONFIG_KEYS:
            try:
                values[key] = _parse_field(key, val)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: {exc}") from exc
        elif key in ("output", "threads"):
            values[key] = val
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return values, algorithms


def build_config(base: dict, overrides: dict) -> SweepConfig:
    """Flags left as ``None`` fall back to the file, then to the defaults."""
    merged = {k: v for k, v in base.items() if k in CONFIG_KEYS}
    merged.update((k, v) for k, v in overrides.items() if k in CONFIG_KEYS and v is not None)
    return replace(SweepConfig(), **merged)
