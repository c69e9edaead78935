"""Benchmark harness CLI: ``sabot run``, ``sabot compare``, ``sabot list``.

Artifacts per seed: ``history.csv`` (ese, best_scalar, indicator),
``front.csv`` (final non-dominated objectives), ``archive.csv`` (all
expensively evaluated points); plus ``summary.json`` per config and
``compare.json`` for paired comparisons. Numbers are written in shortest
round-trip decimal form so repeated seeded runs are byte-identical.
The ``SABOT_OUT`` environment variable overrides the output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .algorithms import algorithm_names
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    EvaluatorCrashed,
    EvaluatorTimeout,
    MismatchedExperiment,
    ProtocolError,
)
from .problems import problem_names
from .runner import RunResult, run
from .surrogates import KERNELS, TAILS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EVALUATOR = 3

_EVALUATOR_ERRORS = (EvaluatorCrashed, EvaluatorTimeout, ProtocolError)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_artifacts(out_dir: Path, result: RunResult, n_var: int, n_obj: int, n_constr: int):
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out_dir / "history.csv",
        ["ese", "best_scalar", "indicator"],
        [(r.ese, r.best_scalar, r.indicator) for r in result.history],
    )
    _write_csv(
        out_dir / "front.csv",
        [f"f{j + 1}" for j in range(n_obj)],
        result.front_f,
    )
    header = (
        [f"x{j + 1}" for j in range(n_var)]
        + [f"f{j + 1}" for j in range(n_obj)]
        + [f"g{j + 1}" for j in range(n_constr)]
    )
    rows = [
        list(s.x) + list(s.f) + list(s.g)
        for s in result.archive.entries
    ]
    _write_csv(out_dir / "archive.csv", header, rows)


def _run_config(config: RunConfig, out_root: Path, quiet: bool) -> dict:
    """Run every seed of one config; returns the summary dict."""
    finals = {}
    for seed in config.seeds:
        problem = config.make_problem()
        try:
            result = run(
                problem,
                algorithm=config.algorithm_name,
                assist=config.assist,
                ese_max=config.ese_max,
                seed=seed,
                pop_size=config.pop_size,
                algorithm_params=config.algorithm_params,
                indicator=config.indicator,
                ref_point=config.ref_point,
                n_reference=config.n_reference,
            )
        finally:
            problem.close()
        _write_artifacts(
            out_root / f"seed_{seed}", result,
            problem.spec.n_var, problem.spec.n_obj, problem.spec.n_constr,
        )
        finals[seed] = result.final_indicator
        if not quiet:
            print(f"seed {seed}: final={_fmt(finals[seed])} ese_used={result.budget.ese_used}")

    values = np.array([finals[s] for s in config.seeds], dtype=float)
    summary = {
        "seeds": config.seeds,
        "indicator": config.indicator or ("hv" if config.ref_point else "best_scalar"),
        "final_per_seed": {str(s): finals[s] for s in config.seeds},
        "median": float(np.median(values)),
        "iqr": float(np.percentile(values, 75) - np.percentile(values, 25)),
    }
    with open(out_root / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def _resolve_out(config: RunConfig, args, default: str) -> Path:
    out = args.out or os.environ.get("SABOT_OUT") or config.out or default
    return Path(out)


def _apply_seed_override(config: RunConfig, args) -> None:
    if args.seeds:
        config.seeds = [int(s) for s in args.seeds.split(",")]


def cmd_run(args) -> int:
    config = load_config(args.config)
    _apply_seed_override(config, args)
    out_root = _resolve_out(config, args, "results")
    out_root.mkdir(parents=True, exist_ok=True)
    _run_config(config, out_root, args.quiet)
    return EXIT_OK


def _lower_is_better(indicator: str) -> bool:
    return indicator != "hv"


def cmd_compare(args) -> int:
    config_a = load_config(args.config_a)
    config_b = load_config(args.config_b)
    _apply_seed_override(config_a, args)
    _apply_seed_override(config_b, args)
    if config_a.experiment_signature() != config_b.experiment_signature():
        raise MismatchedExperiment("configs differ in problem, budget, or seeds")

    out_root = _resolve_out(config_a, args, "compare_results")
    out_root.mkdir(parents=True, exist_ok=True)
    summary_a = _run_config(config_a, out_root / "a", args.quiet)
    summary_b = _run_config(config_b, out_root / "b", args.quiet)

    lower = _lower_is_better(summary_a["indicator"])
    per_seed = []
    wins_a = wins_b = ties = 0
    ratios = []
    for seed in config_a.seeds:
        va = summary_a["final_per_seed"][str(seed)]
        vb = summary_b["final_per_seed"][str(seed)]
        if va == vb:
            winner = "tie"
            ties += 1
        elif (va < vb) == lower:
            winner = "a"
            wins_a += 1
        else:
            winner = "b"
            wins_b += 1
        ratios.append(va / vb if vb != 0 else float("inf") if va else 1.0)
        per_seed.append({"seed": seed, "a": va, "b": vb, "winner": winner})

    report = {
        "indicator": summary_a["indicator"],
        "per_seed": per_seed,
        "wins": {"a": wins_a, "b": wins_b, "tie": ties},
        "median_ratio_a_over_b": float(np.median(ratios)),
    }
    with open(out_root / "compare.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    lines = [f"{'seed':>6} {'a':>16} {'b':>16} {'winner':>7}"]
    for row in per_seed:
        lines.append(f"{row['seed']:>6} {row['a']:>16.6g} {row['b']:>16.6g} {row['winner']:>7}")
    lines.append(f"wins: a={wins_a} b={wins_b} tie={ties}")
    lines.append(f"median ratio a/b: {report['median_ratio_a_over_b']:.6g}")
    table = "\n".join(lines)
    (out_root / "compare.txt").write_text(table + "\n")
    if not args.quiet:
        print(table)

    _maybe_front_svg(config_a, out_root, args.quiet)
    return EXIT_OK


def _maybe_front_svg(config: RunConfig, out_root: Path, quiet: bool) -> None:
    problem = config.make_problem()
    try:
        if problem.spec.n_obj != 2:
            if not quiet:
                print("warning: front.svg skipped (only supported for 2 objectives)")
            return
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 5))
        try:
            ref = problem.reference_front(200)
            ax.plot(ref[:, 0], ref[:, 1], "k.", ms=2, label="reference front")
        except Exception:
            pass
        for label, color in (("a", "tab:blue"), ("b", "tab:orange")):
            pts = []
            for seed in config.seeds:
                path = out_root / label / f"seed_{seed}" / "front.csv"
                data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
                if data.size:
                    pts.append(data)
            if pts:
                all_pts = np.vstack(pts)
                ax.scatter(all_pts[:, 0], all_pts[:, 1], s=12, color=color, label=label)
        ax.set_xlabel("f1")
        ax.set_ylabel("f2")
        ax.legend()
        fig.savefig(out_root / "front.svg")
        plt.close(fig)
    finally:
        problem.close()


def cmd_list(args) -> int:
    print("problems:")
    for name in problem_names():
        print(f"  {name}")
    print("algorithms:")
    defaults = {
        "ga": "pop_size=100 p_c=0.9 eta_c=15 eta_m=20 p_m=1/n_var",
        "de": "pop_size=100 f_weight=0.5 cr=0.9",
        "nsga2": "pop_size=100 p_c=0.9 eta_c=15 eta_m=20 p_m=1/n_var",
        "nsga3": "pop_size=100 p_c=0.9 eta_c=15 eta_m=20 p_m=1/n_var n_partitions=auto",
    }
    for name in algorithm_names():
        print(f"  {name}: {defaults[name]}")
    print("surrogate kernels:")
    for kernel in KERNELS:
        print(f"  {kernel}")
    print("surrogate tails:")
    for tail in TAILS:
        print(f"  {tail}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sabot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a budgeted run per seed")
    p_run.add_argument("config")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="paired comparison of two configs")
    p_cmp.add_argument("config_a")
    p_cmp.add_argument("config_b")
    p_cmp.set_defaults(func=cmd_compare)

    p_list = sub.add_parser("list", help="list problems, algorithms, kernels")
    p_list.set_defaults(func=cmd_list)

    for p in (p_run, p_cmp):
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seeds", help="comma-separated seed list (overrides config)")
        p.add_argument("--quiet", action="store_true")
    p_list.set_defaults(out=None, seeds=None, quiet=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MismatchedExperiment) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _EVALUATOR_ERRORS as exc:
        print(f"evaluator error: {exc}", file=sys.stderr)
        return EXIT_EVALUATOR


if __name__ == "__main__":
    sys.exit(main())
