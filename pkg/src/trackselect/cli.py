"""Command line entry points.

Subcommands:
    default-config   emit the built-in scenario as JSON
    simulate         run one strategy on a scenario, write CSV + JSON summary
    compare          run all five strategies on one scenario into one CSV
    equilibria       brute-force Nash/Pareto report for a game instance JSON
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import game
from .dynamics import STRATEGY_KINDS
from .scenario import config_from_dict, default_scenario
from .simulate import run_monte_carlo, write_csv, write_summary


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="scenario JSON (defaults to the built-in scenario)")
    p.add_argument("--runs", type=int, help="number of Monte Carlo realizations")
    p.add_argument("--horizon", type=int, help="number of time slots per run")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--alpha", type=float, help="reallocation probability")
    p.add_argument("--k-reinit", type=int, help="reinitialization period in slots")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", type=Path, required=True, help="output CSV path")


def _load_config(args) -> "ScenarioConfig":
    if args.config is not None:
        cfg = config_from_dict(json.loads(args.config.read_text()))
    else:
        cfg = default_scenario()
    overrides = {}
    if args.runs is not None:
        overrides["n_runs"] = args.runs
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.k_reinit is not None:
        overrides["k_reinit"] = args.k_reinit
    if getattr(args, "strategy", None) is not None:
        overrides["strategy"] = args.strategy
    return cfg.with_overrides(**overrides) if overrides else cfg


def _cmd_default_config(args) -> int:
    text = json.dumps(default_scenario().to_dict(), indent=2, sort_keys=True)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)
    return 0


def _run_and_write(cfg, strategies, workers, out: Path) -> None:
    result = run_monte_carlo(cfg, strategies=strategies, workers=workers)
    write_csv(out, result.rows)
    write_summary(out.with_suffix(".summary.json"), result.summary)


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    _run_and_write(cfg, (cfg.strategy,), args.workers, args.out)
    print(f"wrote {args.out} and {args.out.with_suffix('.summary.json')}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args)
    _run_and_write(cfg, STRATEGY_KINDS, args.workers, args.out)
    print(f"wrote {args.out} and {args.out.with_suffix('.summary.json')}")
    return 0


def _cmd_equilibria(args) -> int:
    spec = game.spec_from_dict(json.loads(args.game.read_text()))
    space = game.profile_space_size(spec)
    nash = game.nash_set(spec, max_profiles=args.max_profiles)

    # Utilities are common across radars, so Pareto optimality over the full
    # space is equivalent to attaining the maximum utility.
    best = max(
        game.utility_from_counts(spec, p.column_sums())
        for p in game.enumerate_profiles(spec, max_profiles=args.max_profiles)
    )
    po_nash = [
        p for p in nash if game.utility_from_counts(spec, p.column_sums()) >= best
    ]
    distinct_full = [
        p
        for p in nash
        if all(sum(row) == spec.m for row in p.s) and max(p.column_sums()) <= 1
    ]

    report = {
        "n_radars": spec.n_radars,
        "n_targets": spec.n_targets,
        "m": spec.m,
        "c": spec.c,
        "profile_space": space,
        "nash_count": len(nash),
        "pareto_optimal_nash_count": len(po_nash),
        "distinct_full_nash_count": len(distinct_full),
        "nash": [[list(row) for row in p.s] for p in nash],
    }
    if spec.total_beams <= spec.n_targets:
        ordered = math.factorial(spec.n_targets) // math.factorial(
            spec.n_targets - spec.total_beams
        )
        report["ordered_assignment_count"] = ordered
        report["ordered_assignment_note"] = (
            "ordered assignments label each beam of a radar; profile matrices "
            "do not, matrices = ordered / (m!)^n_radars"
        )
    if args.proposition is not None:
        prop = game.check_proposition(spec, args.proposition, max_profiles=args.max_profiles)
        report["proposition"] = {
            "which": prop.proposition,
            "holds": prop.holds,
            "nash_count": prop.nash_count,
            "counterexamples": [[list(r) for r in p.s] for p in prop.counterexamples],
            "notes": prop.notes,
            "details": {
                k: (list(v) if isinstance(v, tuple) else v) for k, v in prop.details.items()
            },
        }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trackselect",
        description="Track selection in a multifunction radar network: "
        "simulation, strategy comparison, and equilibrium analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("default-config", help="emit the built-in scenario as JSON")
    p.add_argument("--out", type=Path, help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_default_config)

    p = sub.add_parser("simulate", help="run one strategy, write CSV and summary")
    p.add_argument("--strategy", choices=STRATEGY_KINDS, help="selection strategy")
    _add_run_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="run all strategies into one CSV")
    _add_run_flags(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("equilibria", help="Nash/Pareto report for a game JSON")
    p.add_argument("--game", type=Path, required=True, help="game instance JSON")
    p.add_argument("--proposition", type=int, choices=(1, 2), help="also check a structure claim")
    p.add_argument("--max-profiles", type=int, default=200_000, help="enumeration size guard")
    p.add_argument("--out", type=Path, help="write the report to a file")
    p.set_defaults(func=_cmd_equilibria)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except game.InstanceTooLargeError as exc:
        print(f"error: instance too large: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
