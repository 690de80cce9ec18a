"""Command-line benchmark runner.

``swarmsched run`` sweeps algorithms x seeds x task counts and writes
``results.csv`` plus ``pareto_front.csv``; ``swarmsched oracle`` scores
algorithms against the exhaustive front of a tiny instance and writes
``quality.csv``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import ALGORITHMS, OUT_OF_SCOPE, run_algorithm
from .engine import EngineConfig, RunResult
from .exceptions import SwarmSchedError, TimeoutExceeded, UnsupportedKind
from .metrics import brute_force_front, front_quality, hypervolume, reference_point, ENUMERATION_GUARD
from .model import CostRates
from .workload import SynthSpec, build_vms, read_swf, swf_to_tasks, synth_tasks

logger = logging.getLogger("swarmsched")

SEED_ENV = "SWARMSCHED_SEED"

RESULT_FIELDS = [
    "algo", "seed", "n_tasks", "n_vms", "makespan", "throughput", "load_deviation",
    "total_cost", "evaluations", "frontier_size", "valid",
]
FRONT_FIELDS = ["algo", "seed", "n_tasks", "n_vms", "index", "makespan", "load_deviation", "total_cost", "assignment"]
QUALITY_FIELDS = [
    "algo", "seed", "n_tasks", "n_vms", "hypervolume", "true_hypervolume", "hv_ratio", "coverage", "frontier_size",
]
TIMING_FIELDS = ["algo", "seed", "n_tasks", "n_vms", "wall_millis"]


def parse_task_counts(text: str) -> list[int]:
    """``"200"`` or ``"100..500:100"`` (inclusive) to a list of task counts."""
    try:
        if ".." not in text:
            counts = [int(text)]
        else:
            span, _, step = text.partition(":")
            lo, hi = (int(x) for x in span.split(".."))
            step_n = int(step) if step else 1
            if step_n < 1:
                raise ValueError
            counts = list(range(lo, hi + 1, step_n))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B:STEP, got {text!r}") from None
    if not counts or min(counts) < 1:
        raise argparse.ArgumentTypeError(f"task counts must be >= 1, got {text!r}")
    return counts


def parse_prices(text: str) -> CostRates:
    try:
        p1, p2, p3 = (float(x) for x in text.split(","))
        return CostRates(p1, p2, p3)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P1,P2,P3 non-negative numbers, got {text!r}") from None


def _algos(text: str) -> list[str]:
    return [a.strip().lower() for a in text.split(",") if a.strip()]


def _bool(text: str) -> bool:
    return str(text).strip().lower() in ("1", "true", "yes", "on")


def read_config(path) -> dict[str, str]:
    """``key=value`` lines; ``#`` starts a comment; keys use flag names."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _add_common(p: argparse.ArgumentParser, default_tasks: str) -> None:
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--algo", type=_algos, default=_algos("phwsoa"), help="comma list of phwsoa|woa|soa|ga|random")
    p.add_argument("--trace", help="SWF trace file")
    p.add_argument("--synth", action="store_true", help="synthesize tasks and a VM fleet from the standard ranges")
    p.add_argument("--tasks", type=parse_task_counts, default=parse_task_counts(default_tasks))
    p.add_argument("--vms", type=int, help="exact VM count (default: uniform in 32..64)")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--seed", type=int, default=None, help=f"first seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--pop", type=int, default=50)
    p.add_argument("--pm", type=float, default=0.05)
    p.add_argument("--ref-mips", type=float, default=1000.0)
    p.add_argument("--prices", type=parse_prices, default=CostRates())
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--timeout-secs", type=float, default=60.0)
    p.add_argument("--no-equalize", action="store_true", help="do not double single-population budgets")
    p.add_argument("--out", default="results")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmsched", description="Multi-objective cloud task scheduling benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="run algorithms and write results.csv / pareto_front.csv"), "200")
    _add_common(sub.add_parser("oracle", help="compare algorithms with the exhaustive front of a tiny instance"), "6")
    return parser


_FLAG_KEYS = {"synth", "no_equalize", "verbose"}


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
        try:
            values = read_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        known = {a.dest for a in sub._actions}  # noqa: SLF001
        unknown = set(values) - known
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
        sub.set_defaults(**{k: (_bool(v) if k in _FLAG_KEYS else v) for k, v in values.items()})
        args = parser.parse_args(argv)
    if bool(args.trace) == bool(args.synth):
        parser.error("choose exactly one workload source: --trace PATH or --synth")
    if args.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            parser.error(f"{SEED_ENV} must be an integer, got {env!r}")
    if args.seeds < 1 or args.seed < 0:
        parser.error("--seeds must be >= 1 and --seed >= 0")
    if args.vms is not None and args.vms < 1:
        parser.error("--vms must be >= 1")
    return args


@dataclass
class _Source:
    args: argparse.Namespace

    def __post_init__(self):
        self.records = read_swf(self.args.trace) if self.args.trace else None

    def workload(self, n: int, seed: int):
        a = self.args
        vm_range = (a.vms, a.vms) if a.vms else SynthSpec.vm_count_range
        spec = SynthSpec(n_tasks=n, vm_count_range=vm_range, seed=seed)
        if self.records is None:
            return synth_tasks(spec), build_vms(spec)
        if n > len(self.records):
            raise SwarmSchedError(f"trace has {len(self.records)} usable jobs, {n} requested")
        return swf_to_tasks(self.records[:n], ref_mips=a.ref_mips), build_vms(spec)


def _config(args, seed: int) -> EngineConfig:
    return EngineConfig(
        pop_size=args.pop,
        max_iter=args.iters,
        pm=args.pm,
        seed=seed,
        parallelism=args.parallelism,
        batch_timeout=args.timeout_secs,
    )


def _result_row(r: RunResult) -> list:
    return [
        r.algo, r.seed, r.n_tasks, r.n_vms, r.makespan, r.throughput, r.load_deviation,
        r.total_cost, r.evaluations, len(r.frontier), int(r.valid),
    ]


def _front_rows(r: RunResult) -> list[list]:
    return [
        [r.algo, r.seed, r.n_tasks, r.n_vms, i, *e.objectives, " ".join(map(str, e.assignment.tolist()))]
        for i, e in enumerate(r.frontier.entries)
    ]


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _summary(results: list[RunResult]) -> str:
    lines = [f"{'algo':<8} {'n':>5} {'m':>3} {'seed':>5} {'makespan':>11} {'thru':>8} {'loaddev':>10} {'cost':>12} {'ms':>8}"]
    for r in results:
        lines.append(
            f"{r.algo:<8} {r.n_tasks:>5} {r.n_vms:>3} {r.seed:>5} {r.makespan:>11.2f} {r.throughput:>8.4f} "
            f"{r.load_deviation:>10.2f} {r.total_cost:>12.2f} {r.wall_millis:>8.0f}"
        )
    return "\n".join(lines)


def cmd_run(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    source = _Source(args)
    results: list[RunResult] = []
    status = 0
    try:
        for n in args.tasks:
            for seed in range(args.seed, args.seed + args.seeds):
                tasks, vms = source.workload(n, seed)
                for algo in args.algo:
                    results.append(
                        run_algorithm(algo, tasks, vms, _config(args, seed), args.prices, equalize=not args.no_equalize)
                    )
    except TimeoutExceeded as exc:
        if exc.partial is not None:
            results.append(exc.partial)
        print(f"error: {exc}; partial report flagged invalid", file=sys.stderr)
        status = 1
    _write_csv(out / "results.csv", RESULT_FIELDS, [_result_row(r) for r in results])
    _write_csv(out / "pareto_front.csv", FRONT_FIELDS, [row for r in results for row in _front_rows(r)])
    _write_csv(
        out / "timings.csv", TIMING_FIELDS, [[r.algo, r.seed, r.n_tasks, r.n_vms, r.wall_millis] for r in results]
    )
    if results:
        print(_summary(results))
    return status


def cmd_oracle(args) -> int:
    out = Path(args.out)
    source = _Source(args)
    rows = []
    for n in args.tasks:
        for seed in range(args.seed, args.seed + args.seeds):
            tasks, vms = source.workload(n, seed)
            true_front = np.array(brute_force_front(tasks, vms, args.prices, ENUMERATION_GUARD))
            runs = [
                run_algorithm(a, tasks, vms, _config(args, seed), args.prices, equalize=not args.no_equalize)
                for a in args.algo
            ]
            ref = reference_point(true_front, *[r.frontier.objectives() for r in runs])
            true_hv = hypervolume(true_front, ref)
            for r in runs:
                q = front_quality(r.frontier.objectives(), true_front, ref)
                rows.append(
                    [r.algo, seed, len(tasks), len(vms), q.hypervolume, true_hv,
                     q.hypervolume / true_hv, q.coverage_of_true_front, len(r.frontier)]
                )
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "quality.csv", QUALITY_FIELDS, rows)
    for row in rows:
        print(f"{row[0]:<8} n={row[2]} m={row[3]} seed={row[1]} hv_ratio={row[6]:.4f} coverage={row[7]:.3f}")
    return 0


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        for algo in args.algo:
            if algo not in ALGORITHMS:
                reason = "not implemented" if algo in OUT_OF_SCOPE else "unknown algorithm"
                raise UnsupportedKind(f"{algo}: {reason} (choose from {', '.join(ALGORITHMS)})")
        return cmd_run(args) if args.command == "run" else cmd_oracle(args)
    except SwarmSchedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
