"""Comparison schedulers that share the objective model and archive.

``ga`` is a multi-objective genetic algorithm on discrete assignments,
``woa`` and ``soa`` are the engine with a single species active, and
``random`` archives uniformly sampled schedules.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .engine import Engine, EngineConfig, RngPolicy, RunResult, entries_from, result_from_archive
from .exceptions import InvalidWorkload, TimeoutExceeded, UnsupportedKind
from .model import CostRates, Task, Vm, Workload
from .pareto import Archive, archive_update, crowding_distances, pareto_ranks

ALGORITHMS = ("phwsoa", "woa", "soa", "ga", "random")
OUT_OF_SCOPE = ("pewoa", "gcwoa")


@dataclass(frozen=True)
class GaConfig:
    pop_size: int = 100
    max_iter: int = 100
    crossover_rate: float = 0.9
    mutation_rate: float = 0.05
    tournament_size: int = 2

    def __post_init__(self):
        if self.pop_size < 2 or self.pop_size % 2:
            raise ValueError("GA pop_size must be even and >= 2")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (0 <= self.crossover_rate <= 1 and 0 <= self.mutation_rate <= 1):
            raise ValueError("rates must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")


def crossover(p1: np.ndarray, p2: np.ndarray, cut: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-point crossover; genes before ``cut`` come from the first parent."""
    return np.concatenate([p1[:cut], p2[cut:]]), np.concatenate([p2[:cut], p1[cut:]])


def _fitness_keys(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = pareto_ranks(F)
    crowd = np.zeros(len(F))
    for r in np.unique(ranks):
        members = np.flatnonzero(ranks == r)
        crowd[members] = crowding_distances(F[members])
    return ranks, crowd


def tournament(F: np.ndarray, size: int, n_winners: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of tournament winners by (lower rank, larger crowding)."""
    ranks, crowd = _fitness_keys(F)
    entrants = rng.integers(0, len(F), (n_winners, size))
    winners = entrants[:, 0].copy()
    for k in range(1, size):
        challenger = entrants[:, k]
        better = (ranks[challenger] < ranks[winners]) | (
            (ranks[challenger] == ranks[winners]) & (crowd[challenger] > crowd[winners])
        )
        winners = np.where(better, challenger, winners)
    return winners


def ga_step(population: np.ndarray, objectives: np.ndarray, cfg: GaConfig, n_vms: int, rng: np.random.Generator):
    """One generation of children from an evaluated population."""
    N, n = population.shape
    parents = population[tournament(objectives, cfg.tournament_size, N, rng)]
    do_cross = rng.random(N // 2) < cfg.crossover_rate
    cuts = rng.integers(1, max(n, 2), N // 2)
    children = parents.copy()
    for k in np.flatnonzero(do_cross):
        children[2 * k], children[2 * k + 1] = crossover(parents[2 * k], parents[2 * k + 1], cuts[k])
    flip = rng.random((N, n)) < cfg.mutation_rate
    fresh = rng.integers(0, n_vms, (N, n))
    return np.where(flip, fresh, children)


def _timed_evaluate(workload: Workload, A: np.ndarray, timeout: float) -> np.ndarray:
    started = time.perf_counter()
    F = workload.evaluate_many(A)
    if time.perf_counter() - started > timeout:
        raise TimeoutExceeded(f"evaluation batch exceeded {timeout} s")
    return F


def run_ga(workload: Workload, cfg: GaConfig, seed: int = 0, capacity: int = 50, timeout: float = 60.0) -> RunResult:
    started = time.perf_counter()
    policy = RngPolicy(seed)
    rng = policy.stream(0, "ga")
    pop = rng.integers(0, workload.n_vms, (cfg.pop_size, workload.n_tasks))
    F = _timed_evaluate(workload, pop, timeout)
    archive = archive_update(Archive(capacity=capacity), entries_from(pop, F))
    history = [archive.minima()]
    evaluations = len(pop)
    for t in range(1, cfg.max_iter + 1):
        pop = ga_step(pop, F, cfg, workload.n_vms, policy.stream(t, "ga"))
        F = _timed_evaluate(workload, pop, timeout)
        archive = archive_update(archive, entries_from(pop, F))
        history.append(archive.minima())
        evaluations += len(pop)
    return result_from_archive("ga", seed, workload, archive, started, evaluations, history)


def run_random(workload: Workload, samples_per_iter: int, max_iter: int, seed: int = 0, capacity: int = 50, timeout: float = 60.0) -> RunResult:
    """Archive ``samples_per_iter * (max_iter + 1)`` uniform random schedules."""
    started = time.perf_counter()
    policy = RngPolicy(seed)
    archive = Archive(capacity=capacity)
    history = []
    evaluations = 0
    for t in range(max_iter + 1):
        A = policy.stream(t, "random").integers(0, workload.n_vms, (samples_per_iter, workload.n_tasks))
        archive = archive_update(archive, entries_from(A, _timed_evaluate(workload, A, timeout)))
        history.append(archive.minima())
        evaluations += len(A)
    return result_from_archive("random", seed, workload, archive, started, evaluations, history)


def run_baseline(
    kind: str,
    tasks: Sequence[Task],
    vms: Sequence[Vm],
    config: EngineConfig = EngineConfig(),
    rates: CostRates | None = None,
) -> RunResult:
    """Run one comparison algorithm with ``config`` taken as-is (no budget scaling)."""
    kind = kind.lower()
    if kind in OUT_OF_SCOPE:
        raise UnsupportedKind(f"{kind} is not implemented: its update rules are not published in reproducible form")
    if kind not in ("woa", "soa", "ga", "random"):
        raise UnsupportedKind(f"unknown baseline {kind!r}")
    if len(tasks) == 0 or len(vms) == 0:
        raise InvalidWorkload("need at least one task and one VM")
    wl = Workload(tasks, vms, rates)
    if kind in ("woa", "soa"):
        return Engine(wl, replace(config, species=(kind,)), algo=kind).run()
    if kind == "ga":
        pop = config.pop_size + config.pop_size % 2
        ga = GaConfig(pop_size=pop, max_iter=config.max_iter, mutation_rate=config.pm)
        return run_ga(wl, ga, config.seed, config.archive_capacity, config.batch_timeout)
    return run_random(wl, config.pop_size, config.max_iter, config.seed, config.archive_capacity, config.batch_timeout)


def run_algorithm(
    algo: str,
    tasks: Sequence[Task],
    vms: Sequence[Vm],
    config: EngineConfig = EngineConfig(),
    rates: CostRates | None = None,
    equalize: bool = True,
) -> RunResult:
    """Run any supported algorithm, equalizing evaluation budgets by default.

    The hybrid evaluates ``2 * pop_size`` schedules per iteration, so with
    ``equalize`` the single-population algorithms get a doubled population.
    """
    algo = algo.lower()
    if algo == "phwsoa":
        if len(tasks) == 0 or len(vms) == 0:
            raise InvalidWorkload("need at least one task and one VM")
        return Engine(Workload(tasks, vms, rates), replace(config, species=("woa", "soa")), algo="phwsoa").run()
    if equalize:
        config = replace(config, pop_size=2 * config.pop_size)
    return run_baseline(algo, tasks, vms, config, rates)
