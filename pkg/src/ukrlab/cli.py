"""Command line front end: ``ukrlab {run,ratio,bounds,adversary,sweep,verify}``."""

from __future__ import annotations

import argparse
import random
import sys
from decimal import Context, Decimal
from fractions import Fraction

from . import adversary as adv
from .algorithms import REGISTRY, MixedStrategy, expected_gain, make
from .bounds import lower_bound_cN, partial_sum_S, s_infinity_bracket, t_value
from .core import DomainError, IllegalMove, format_rat, rat, read_instance, replay, write_instance
from .harness import (
    ConfigError,
    build_config,
    parse_config,
    rows_to_csv,
    run_sweep,
)
from .oracle import ResourceLimit, UndefinedRatio, competitive_ratio, optimal


def _dec(x: Fraction, digits: int) -> str:
    return str(Context(prec=digits).divide(Decimal(x.numerator), Decimal(x.denominator)))


def _show(label: str, x: Fraction, digits: int) -> str:
    return f"{label:10s} {format_rat(x)}  ~ {_dec(x, digits)}"


def cmd_run(args) -> int:
    inst = read_instance(args.instance)
    alg = make(args.alg)
    opt = optimal(inst).optimum
    if isinstance(alg, MixedStrategy):
        if args.sample_seed is not None:
            chosen = alg.sample(random.Random(args.sample_seed))
            print(f"sampled strategy {chosen.name} (seed {args.sample_seed})")
            result = replay(chosen, inst)
            g = result.gain
            _print_trace(result.trace)
        else:
            g = expected_gain(alg, inst)
            print("expected gain over all strategies (exact)")
    else:
        result = replay(alg, inst)
        g = result.gain
        _print_trace(result.trace)
    print(f"gain  {format_rat(g)}")
    print(f"opt   {format_rat(opt)}")
    print(f"ratio {format_rat(competitive_ratio(g, opt=opt))}")
    return 0


def _print_trace(trace) -> None:
    for st in trace:
        removed = ", ".join(f"{x!r}x{c}" for x, c in st.removed.entries) or "-"
        print(f"step {st.item_index}: packed {st.copies_packed}, removed {removed}, knapsack {st.knapsack_after!r}")


def cmd_ratio(args) -> int:
    inst = read_instance(args.instance)
    res = optimal(inst)
    print(f"opt     {format_rat(res.optimum)}")
    print(f"method  {res.method}")
    print(f"witness {res.witness!r}")
    return 0


def cmd_bounds(args) -> int:
    N, d = args.n, args.digits
    print(_show(f"S_{N}", partial_sum_S(N), d))
    print(_show(f"T_{N}", t_value(N), d))
    lo, hi = s_infinity_bracket(N)
    print(f"S_inf in [{_dec(lo, d)}, {_dec(hi, d)}]")
    if N >= 3:
        sol = lower_bound_cN(N, rat(args.precision))
        print(_show(f"c_{N}", sol.c, d))
        print(f"c_{N} in [{_dec(sol.c_lo, d)}, {_dec(sol.c_hi, d)}]")
        for i, v in enumerate(sol.v, 1):
            print(f"  v_{i} ~ {_dec(v, d)}")
        worst = max(sol.residuals.values())
        print(f"residual {float(worst):.3e} (tolerance {float(sol.tolerance):.3e})")
    return 0


def cmd_adversary(args) -> int:
    eps = rat(args.eps)
    if args.game == "prop-det":
        rep = adv.proportional_det_adversary(make(args.alg), eps)
    elif args.game == "yao":
        rep = adv.yao_experiment(make(args.alg), eps)
    elif args.game == "tightness":
        inst = adv.tightness_instance(args.n, eps)
        alg = make(args.alg)
        g = expected_gain(alg, inst)
        res = optimal(inst)
        rep = adv.AdversaryReport(inst, g, res.optimum, competitive_ratio(g, opt=res.optimum), [f"N={args.n}"], res)
    else:
        rep = adv.general_adversary(make(args.alg), args.n, eps)
    print(rep.summary())
    if args.write:
        write_instance(rep.instance_emitted, args.write)
    return 0


def cmd_sweep(args) -> int:
    base, algs = {}, []
    if args.config:
        with open(args.config) as fh:
            base, algs = parse_config(fh.read())
    flags = {
        "count": args.count,
        "items_min": args.items_min,
        "items_max": args.items_max,
        "weight_model": args.weight_model,
        "value_model": args.value_model,
        "max_denominator": args.max_denominator,
        "seed": args.seed,
        "eps": rat(args.eps) if args.eps else None,
        "rho_max": rat(args.rho_max) if args.rho_max else None,
        "category_weights": tuple(int(p) for p in args.category_weights.split(",")) if args.category_weights else None,
    }
    cfg = build_config(base, flags)
    if args.alg:
        algs = args.alg
    threads = args.threads if args.threads is not None else (int(base["threads"]) if "threads" in base else None)
    rows, summary = run_sweep(cfg, algs, threads)
    text = rows_to_csv(rows)
    output = args.output or base.get("output")
    if output and output != "-":
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(summary.text(), file=sys.stderr)
    return 1 if summary.violations else 0


def cmd_verify(args) -> int:
    from .verify import run_checks

    ok = run_checks(quick=not args.full)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ukrlab", description="Online unbounded knapsack with removal: algorithms, oracle, bounds, games.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="replay one algorithm on an instance file")
    r.add_argument("--alg", required=True, choices=sorted(REGISTRY))
    r.add_argument("--instance", required=True)
    r.add_argument("--sample-seed", type=int, help="sample one strategy of a mixture instead of the exact expectation")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("ratio", help="offline optimum of an instance file")
    o.add_argument("--instance", required=True)
    o.set_defaults(func=cmd_ratio)

    b = sub.add_parser("bounds", help="S_N, T_N, the S_inf bracket and c_N")
    b.add_argument("--n", type=int, default=5)
    b.add_argument("--digits", type=int, default=12)
    b.add_argument("--precision", default="1/1000000000")
    b.set_defaults(func=cmd_bounds)

    a = sub.add_parser("adversary", help="play a lower-bound game")
    a.add_argument("--game", required=True, choices=["prop-det", "yao", "tightness", "general"])
    a.add_argument("--alg", default="focus", choices=sorted(REGISTRY))
    a.add_argument("--eps", default="1/1000000")
    a.add_argument("--n", type=int, default=5)
    a.add_argument("--write", help="write the emitted instance to this file")
    a.set_defaults(func=cmd_adversary)

    s = sub.add_parser("sweep", help="seeded random sweep, CSV output")
    s.add_argument("--config")
    s.add_argument("--alg", action="append", choices=sorted(REGISTRY))
    s.add_argument("--count", type=int)
    s.add_argument("--items-min", type=int)
    s.add_argument("--items-max", type=int)
    s.add_argument("--weight-model")
    s.add_argument("--value-model")
    s.add_argument("--max-denominator", type=int)
    s.add_argument("--category-weights")
    s.add_argument("--eps")
    s.add_argument("--rho-max")
    s.add_argument("--seed", type=int)
    s.add_argument("--threads", type=int)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the built-in property and identity checks")
    v.add_argument("--full", action="store_true", help="use acceptance-sized sweeps")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IllegalMove, ResourceLimit, UndefinedRatio) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
