"""The hybrid whale/seagull Pareto optimizer.

One iteration moves every agent (whales by the WOA rules, seagulls by
the SOA rules, both steered by leaders drawn from the shared archive),
applies the uniform-reset mutation, turns the continuous positions into
feasible schedules, evaluates them and merges them into the archive.

Randomness is keyed by ``(seed, iteration, species)``: each such stream
draws one row of randoms per agent before any work is dispatched, so the
thread count cannot change a single output bit.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import soa, woa
from .exceptions import InvalidWorkload, TimeoutExceeded
from .halton import HaltonConfig, init_populations
from .model import CostRates, ObjectiveVector, Task, Vm, Workload, throughput
from .pareto import (
    DEFAULT_CAPACITY,
    DEFAULT_LEADER_POOL,
    Archive,
    ArchiveEntry,
    archive_update,
    leader_pool,
    msd_select,
)

logger = logging.getLogger(__name__)

SPECIES = ("woa", "soa")
_SPECIES_CODE = {"woa": 1, "soa": 2, "ga": 3, "random": 4}


@dataclass(frozen=True)
class EngineConfig:
    pop_size: int = 50
    max_iter: int = 100
    pm: float = 0.05
    seed: int = 0
    parallelism: int = 1
    batch_timeout: float = 60.0
    archive_capacity: int = DEFAULT_CAPACITY
    leader_pool: int = DEFAULT_LEADER_POOL
    species: tuple[str, ...] = SPECIES
    lb: float | None = None
    ub: float | None = None
    spiral_b: float = woa.SPIRAL_B
    fc: float = 2.0
    spiral_u: float = 1.0
    spiral_v: float = 1.0

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("pop_size must be >= 2")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 <= self.pm <= 1:
            raise ValueError("pm must lie in [0, 1]")
        if not self.batch_timeout > 0:
            raise ValueError("batch_timeout must be > 0")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if not self.species or any(s not in SPECIES for s in self.species):
            raise ValueError(f"species must be a non-empty subset of {SPECIES}")
        if self.lb is not None and self.ub is not None and not self.lb < self.ub:
            raise ValueError("lb must be < ub")

    def bounds(self, n_vms: int) -> tuple[float, float]:
        """Search box in VM-index space; a one-VM fleet gets [0, 1]."""
        lb = 0.0 if self.lb is None else self.lb
        ub = float(max(n_vms - 1, 1)) if self.ub is None else self.ub
        return lb, ub


class RngPolicy:
    """Derives reproducible, independent streams from one master seed."""

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)

    def stream(self, iteration: int, species: str) -> np.random.Generator:
        """Stream for one species in one iteration; row ``i`` of every draw belongs to agent ``i``."""
        return np.random.default_rng([self.master_seed, iteration, _SPECIES_CODE[species]])


@dataclass
class RunResult:
    algo: str
    seed: int
    n_tasks: int
    n_vms: int
    frontier: Archive
    chosen: ArchiveEntry
    makespan: float
    throughput: float
    load_deviation: float
    total_cost: float
    wall_millis: float
    evaluations: int
    history: np.ndarray = field(repr=False, default_factory=lambda: np.empty((0, 3)))
    valid: bool = True

    @property
    def objectives(self) -> ObjectiveVector:
        return self.chosen.objectives


def result_from_archive(algo, seed, workload: Workload, archive: Archive, started, evaluations, history, valid=True):
    chosen = msd_select(archive)
    ms, dev, cost = chosen.objectives
    return RunResult(
        algo=algo,
        seed=seed,
        n_tasks=workload.n_tasks,
        n_vms=workload.n_vms,
        frontier=archive,
        chosen=chosen,
        makespan=ms,
        throughput=throughput(workload.n_tasks, ms),
        load_deviation=dev,
        total_cost=cost,
        wall_millis=(time.perf_counter() - started) * 1000.0,
        evaluations=evaluations,
        history=np.asarray(history, dtype=float).reshape(-1, 3),
        valid=valid,
    )


def entries_from(A: np.ndarray, F: np.ndarray) -> list[ArchiveEntry]:
    return [ArchiveEntry(a, ObjectiveVector(*f)) for a, f in zip(A, F.tolist())]


def decode(pos, n_vms: int) -> tuple[np.ndarray, np.ndarray]:
    """Round a position to VM indices.

    Returns the assignment and a boolean mask of dimensions that rounded
    outside ``[0, n_vms - 1]`` (or were not finite); masked entries hold -1
    until repaired.
    """
    cand = np.floor(np.asarray(pos, dtype=float) + 0.5)
    marked = ~((cand >= 0) & (cand <= n_vms - 1))
    return np.where(marked, -1, cand).astype(np.int64), marked


def repair_load_aware(assignment, marked, lengths, mips, loads) -> tuple[np.ndarray, np.ndarray]:
    """Place each marked task, in task order, on the currently least-loaded VM.

    ``loads`` must already hold the execution time of the unmarked tasks.
    Ties go to the lowest VM id. Accepts one assignment or a block of rows
    (with matching mask and load rows). Returns the repaired assignment and
    the updated load table; the inputs are not modified.
    """
    single = np.ndim(assignment) == 1
    A = np.array(assignment, dtype=np.int64, ndmin=2)
    marked = np.array(marked, dtype=bool, ndmin=2)
    loads = np.array(loads, dtype=float, ndmin=2)
    for i in np.flatnonzero(marked.any(axis=0)):
        rows = np.flatnonzero(marked[:, i])
        target = np.argmin(loads[rows], axis=1)
        A[rows, i] = target
        loads[rows, target] += lengths[i] / mips[target]
    if single:
        return A[0], loads[0]
    return A, loads


def apply_mutation(pos, gate, r, pm: float, lb: float, ub: float):
    """Reset positions whose gate draw is below ``pm`` to ``lb + r*(ub - lb)``."""
    return np.where(gate < pm, lb + r * (ub - lb), pos)


def mutate(pos, pm: float, lb: float, ub: float, rng: np.random.Generator) -> np.ndarray:
    pos = np.asarray(pos, dtype=float)
    if rng.random() >= pm:
        return pos
    return lb + rng.random(pos.shape) * (ub - lb)


@dataclass
class EngineState:
    t: int
    positions: dict[str, np.ndarray]
    archive: Archive
    evaluations: int = 0
    history: list = field(default_factory=list)


class Engine:
    """Runs the optimizer over one workload.

    Parameters
    ----------
    workload : Workload
        Tasks, VMs and prices in array form.
    config : EngineConfig
    algo : str
        Label written into the result.
    """

    def __init__(self, workload: Workload, config: EngineConfig = EngineConfig(), algo: str = "phwsoa"):
        self.workload = workload
        self.config = config
        self.algo = algo
        self.policy = RngPolicy(config.seed)
        self.lb, self.ub = config.bounds(workload.n_vms)
        self._executor: ThreadPoolExecutor | None = None

    # -- schedule realization ------------------------------------------------

    def realize(self, positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Turn a block of positions into feasible, scored assignments.

        Returns the feasible assignments and their objective rows.
        """
        wl = self.workload
        A, marked = decode(positions, wl.n_vms)
        if marked.any():
            partial = wl.loads_many(A, mask=~marked)
            A, _ = repair_load_aware(A, marked, wl.lengths, wl.mips, partial)
        return A, wl.evaluate_many(A)

    def evaluate_batch(self, positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Realize every row, in row order, within the batch timeout."""
        timeout = self.config.batch_timeout
        started = time.perf_counter()
        if self._executor is None:
            A, F = self.realize(positions)
        else:
            chunks = np.array_split(positions, min(self.config.parallelism, len(positions)))
            futures = [self._executor.submit(self.realize, c) for c in chunks]
            _, pending = wait(futures, timeout=timeout)
            if pending:
                for f in pending:
                    f.cancel()
                raise TimeoutExceeded(f"evaluation batch exceeded {timeout} s")
            parts = [f.result() for f in futures]
            A = np.vstack([p[0] for p in parts])
            F = np.vstack([p[1] for p in parts])
        if time.perf_counter() - started > timeout:
            raise TimeoutExceeded(f"evaluation batch exceeded {timeout} s")
        return A, F

    # -- iteration -------------------------------------------------------------

    def _commit(self, state: EngineState, species_rows: dict[str, np.ndarray]) -> None:
        order = [s for s in self.config.species if s in species_rows]
        block = np.vstack([species_rows[s] for s in order])
        A, F = self.evaluate_batch(block)
        state.archive = archive_update(state.archive, entries_from(A, F))
        state.evaluations += len(A)
        start = 0
        for s in order:
            count = len(species_rows[s])
            state.positions[s] = A[start : start + count].astype(float)
            start += count
        state.history.append(state.archive.minima())

    def init_state(self) -> EngineState:
        cfg = self.config
        halton = HaltonConfig(dims=self.workload.n_tasks, lb=self.lb, ub=self.ub)
        whales, gulls = init_populations(cfg.pop_size, halton)
        rows = {"woa": whales, "soa": gulls}
        state = EngineState(t=0, positions={}, archive=Archive(capacity=cfg.archive_capacity))
        self._commit(state, {s: rows[s] for s in cfg.species})
        return state

    def propose(self, state: EngineState, species: str, t: int) -> np.ndarray:
        """New positions for one species at iteration ``t``, mutation included."""
        cfg = self.config
        pos = state.positions[species]
        n_agents = len(pos)
        rng = self.policy.stream(t, species)
        pool = leader_pool(state.archive, cfg.leader_pool)
        leader_idx = pool[rng.integers(0, len(pool), n_agents)]
        leaders = np.array([state.archive.entries[i].assignment for i in leader_idx], dtype=float)
        if species == "woa":
            params = woa.WoaParams(t=t, max_iter=cfg.max_iter, b=cfg.spiral_b)
            draws = woa.draw_woa(n_agents, params.a_coef, n_agents, rng)
            moved = woa.woa_update(pos, leaders, draws, params.b)
        else:
            params = soa.SoaParams(t=t, max_iter=cfg.max_iter, fc=cfg.fc, u=cfg.spiral_u, v=cfg.spiral_v)
            draws = soa.draw_soa(n_agents, params.a_coef, rng)
            moved = soa.soa_update(pos, leaders, draws, params.u, params.v)
        gate = rng.random(n_agents)[:, None]
        r = rng.random(pos.shape)
        return apply_mutation(moved, gate, r, cfg.pm, self.lb, self.ub)

    def iterate(self, state: EngineState) -> EngineState:
        t = state.t + 1
        proposals = {s: self.propose(state, s, t) for s in self.config.species}
        self._commit(state, proposals)
        state.t = t
        return state

    def run(self) -> RunResult:
        cfg = self.config
        started = time.perf_counter()
        state = None
        if cfg.parallelism > 1:
            self._executor = ThreadPoolExecutor(max_workers=cfg.parallelism)
        try:
            state = self.init_state()
            while state.t < cfg.max_iter:
                self.iterate(state)
        except TimeoutExceeded as exc:
            if state is not None and len(state.archive):
                exc.partial = result_from_archive(
                    self.algo, cfg.seed, self.workload, state.archive, started, state.evaluations, state.history, False
                )
            raise
        finally:
            if self._executor is not None:
                self._executor.shutdown(wait=False, cancel_futures=True)
                self._executor = None
        logger.debug("%s seed=%d finished: %d evaluations", self.algo, cfg.seed, state.evaluations)
        return result_from_archive(self.algo, cfg.seed, self.workload, state.archive, started, state.evaluations, state.history)


def run(
    tasks: Sequence[Task],
    vms: Sequence[Vm],
    config: EngineConfig = EngineConfig(),
    rates: CostRates | None = None,
    algo: str = "phwsoa",
) -> RunResult:
    """Optimize the schedule of ``tasks`` on ``vms`` and return the frontier and chosen solution."""
    if len(tasks) == 0 or len(vms) == 0:
        raise InvalidWorkload("need at least one task and one VM")
    return Engine(Workload(tasks, vms, rates), config, algo).run()
