"""Cloud entities and the analytic objective model.

Tasks and VMs are plain frozen dataclasses. For the hot path the
optimizers work on a :class:`Workload`, which packs the same data into
numpy arrays once so that evaluating an assignment is a couple of
``bincount`` calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import InvalidWorkload

BITS_PER_BYTE = 8
MEGA = 1_000_000


@dataclass(frozen=True)
class Task:
    id: int
    length_mi: float
    pes_number: int = 1
    file_size_b: float = 0.0
    output_size_b: float = 0.0

    def __post_init__(self):
        if not self.length_mi > 0:
            raise ValueError(f"task {self.id}: length_mi must be > 0, got {self.length_mi}")
        if self.pes_number < 1:
            raise ValueError(f"task {self.id}: pes_number must be >= 1")
        if self.file_size_b < 0 or self.output_size_b < 0:
            raise ValueError(f"task {self.id}: payload sizes must be >= 0")


@dataclass(frozen=True)
class Vm:
    id: int
    mips: float
    pes_number: int = 1
    ram_mb: float = 512.0
    storage_mb: float = 3072.0
    bw_mbps: float = 1000.0

    def __post_init__(self):
        if not self.mips > 0:
            raise ValueError(f"vm {self.id}: mips must be > 0, got {self.mips}")
        if self.pes_number < 1:
            raise ValueError(f"vm {self.id}: pes_number must be >= 1")
        if not (self.ram_mb > 0 and self.storage_mb > 0 and self.bw_mbps > 0):
            raise ValueError(f"vm {self.id}: every capacity must be > 0")


@dataclass(frozen=True)
class CostRates:
    """Unit prices: RAM and storage per MB-second, bandwidth per second."""

    ram_price_per_mb_sec: float = 0.001
    storage_price_per_mb_sec: float = 0.0005
    bw_price_per_sec: float = 10.0

    def __post_init__(self):
        if min(self.ram_price_per_mb_sec, self.storage_price_per_mb_sec, self.bw_price_per_sec) < 0:
            raise ValueError("cost rates must be >= 0")


class ObjectiveVector(NamedTuple):
    """The three minimized objectives."""

    makespan: float
    load_deviation: float
    total_cost: float


def execution_time(task: Task, vm: Vm) -> float:
    return task.length_mi / vm.mips


def _as_assignment(a, n: int, m: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.shape != (n,):
        raise ValueError(f"assignment must have length {n}, got shape {a.shape}")
    if n and (a.min() < 0 or a.max() >= m):
        raise ValueError(f"assignment entries must lie in [0, {m - 1}]")
    return a


def _row_sum(X: np.ndarray) -> np.ndarray:
    # left-to-right per row, so the result never depends on how many rows are batched
    return np.cumsum(X, axis=1)[:, -1]


def load_table(tasks: Sequence[Task], vms: Sequence[Vm], a) -> np.ndarray:
    """Accumulated execution time per VM for assignment ``a``."""
    loads = np.zeros(len(vms))
    a = _as_assignment(a, len(tasks), len(vms))
    for task, j in zip(tasks, a):
        loads[j] += execution_time(task, vms[j])
    return loads


def makespan(loads) -> float:
    loads = np.asarray(loads, dtype=float)
    if loads.size == 0:
        raise ValueError("makespan of an empty load table is undefined")
    return float(loads.max())


def throughput(n_tasks: int, makespan_s: float) -> float:
    """Tasks completed per second."""
    if n_tasks == 0:
        return 0.0
    if makespan_s <= 0:
        raise ValueError("throughput is undefined for a zero makespan with pending tasks")
    return n_tasks / makespan_s


def load_deviation(loads) -> float:
    """Population standard deviation of per-VM loads."""
    loads = np.asarray(loads, dtype=float)
    return float(np.sqrt(np.mean((loads - loads.mean()) ** 2)))


def running_cost(vms: Sequence[Vm], loads, rates: CostRates) -> float:
    unit = np.array(
        [vm.ram_mb * rates.ram_price_per_mb_sec + vm.storage_mb * rates.storage_price_per_mb_sec for vm in vms]
    )
    return float(np.sum(unit * np.asarray(loads, dtype=float)))


def bandwidth_cost(tasks: Sequence[Task], vms: Sequence[Vm], a, rates: CostRates) -> float:
    a = _as_assignment(a, len(tasks), len(vms))
    payload = np.zeros(len(vms))
    for task, j in zip(tasks, a):
        payload[j] += task.file_size_b + task.output_size_b
    bytes_per_sec = np.array([vm.bw_mbps for vm in vms]) * MEGA / BITS_PER_BYTE
    return float(np.sum(payload / bytes_per_sec) * rates.bw_price_per_sec)


def evaluate(tasks: Sequence[Task], vms: Sequence[Vm], a, rates: CostRates | None = None) -> ObjectiveVector:
    """Score one assignment on all three objectives."""
    return Workload.from_entities(tasks, vms, rates).evaluate(a)


class Workload:
    """Array form of a task set, a VM fleet and the price table.

    Attributes mirror the entity fields: ``lengths`` and ``payload`` are
    per task, ``mips``, ``unit_cost`` and ``bw_bytes`` per VM.
    """

    def __init__(self, tasks: Sequence[Task], vms: Sequence[Vm], rates: CostRates | None = None):
        if len(tasks) == 0 or len(vms) == 0:
            raise InvalidWorkload(f"need at least one task and one VM, got n={len(tasks)}, m={len(vms)}")
        ids = [vm.id for vm in vms]
        if ids != list(range(len(vms))):
            raise InvalidWorkload("VM ids must be contiguous 0..m-1 in order")
        if len({t.id for t in tasks}) != len(tasks):
            raise InvalidWorkload("task ids must be unique")
        self.tasks = tuple(tasks)
        self.vms = tuple(vms)
        self.rates = rates if rates is not None else CostRates()
        self.lengths = np.array([t.length_mi for t in tasks], dtype=float)
        self.payload = np.array([t.file_size_b + t.output_size_b for t in tasks], dtype=float)
        self.mips = np.array([vm.mips for vm in vms], dtype=float)
        self.unit_cost = np.array(
            [
                vm.ram_mb * self.rates.ram_price_per_mb_sec + vm.storage_mb * self.rates.storage_price_per_mb_sec
                for vm in vms
            ]
        )
        self.bw_bytes = np.array([vm.bw_mbps for vm in vms], dtype=float) * MEGA / BITS_PER_BYTE

    @classmethod
    def from_entities(cls, tasks, vms, rates=None) -> "Workload":
        return cls(tasks, vms, rates)

    @property
    def n_tasks(self) -> int:
        return self.lengths.size

    @property
    def n_vms(self) -> int:
        return self.mips.size

    def loads(self, a: np.ndarray) -> np.ndarray:
        return self.loads_many(np.asarray(a)[None, :])[0]

    def loads_many(self, A: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        """Per-VM load table for each row of ``A``; masked-out tasks contribute nothing."""
        N = A.shape[0]
        m = self.n_vms
        A = np.where(mask, A, 0) if mask is not None else A
        weights = self.lengths / self.mips[A]
        if mask is not None:
            weights = np.where(mask, weights, 0.0)
        flat = (A + m * np.arange(N)[:, None]).ravel()
        return np.bincount(flat, weights=weights.ravel(), minlength=N * m).reshape(N, m)

    def evaluate(self, a) -> ObjectiveVector:
        a = _as_assignment(a, self.n_tasks, self.n_vms)
        return ObjectiveVector(*self.evaluate_many(a[None, :])[0].tolist())

    def evaluate_many(self, A: np.ndarray) -> np.ndarray:
        """Objective rows ``(makespan, load deviation, cost)`` for each assignment row.

        Rows are reduced independently, so a row scores the same alone or in a batch.
        """
        N, m = A.shape[0], self.n_vms
        loads = self.loads_many(A)
        flat = (A + m * np.arange(N)[:, None]).ravel()
        payload = np.bincount(flat, weights=np.broadcast_to(self.payload, A.shape).ravel(), minlength=N * m)
        bw_time = _row_sum(payload.reshape(N, m) / self.bw_bytes)
        cost = _row_sum(loads * self.unit_cost) + bw_time * self.rates.bw_price_per_sec
        span = loads.max(axis=1)
        mean = _row_sum(loads) / m
        dev = np.sqrt(_row_sum((loads - mean[:, None]) ** 2) / m)
        out = np.column_stack([span, dev, cost])
        if not np.isfinite(out).all():
            raise ValueError("non-finite objective value")
        return out
