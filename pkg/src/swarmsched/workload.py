"""Workload sources: SWF trace parsing and synthetic task sets and VM fleets."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .exceptions import EmptyTrace
from .model import Task, Vm

logger = logging.getLogger(__name__)

SWF_FIELDS = 18
LENGTH_RANGE_MI = (15_000.0, 500_000.0)
DEFAULT_PAYLOAD_B = 300.0


class SwfRecord(NamedTuple):
    job_id: int
    run_time_sec: float
    allocated_procs: int


class SwfTrace(list):
    """List of :class:`SwfRecord` that also remembers how many lines were skipped."""

    skipped: int = 0


def parse_swf(stream: Iterable[str]) -> SwfTrace:
    """Parse Standard Workload Format lines.

    Comment lines (``;``) and blank lines are ignored. A data line is
    skipped, and counted in ``.skipped``, when it has fewer than 18 fields
    or does not parse. The same happens when its run time or processor
    count is missing (``-1``) or not positive.

    Raises
    ------
    EmptyTrace
        If no line yields a usable record.
    """
    trace = SwfTrace()
    skipped = 0
    for line in stream:
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        fields = line.split()
        if len(fields) < SWF_FIELDS:
            skipped += 1
            continue
        try:
            job_id = int(fields[0])
            run_time = float(fields[3])
            procs = int(float(fields[4]))
        except ValueError:
            skipped += 1
            continue
        if run_time <= 0 or procs < 1:
            skipped += 1
            continue
        trace.append(SwfRecord(job_id, run_time, procs))
    trace.skipped = skipped
    if not trace:
        raise EmptyTrace(f"no valid SWF records ({skipped} lines skipped)")
    if skipped:
        logger.info("parse_swf: kept %d records, skipped %d lines", len(trace), skipped)
    return trace


def read_swf(path) -> SwfTrace:
    with open(path, encoding="utf-8", errors="replace") as fh:
        return parse_swf(fh)


def swf_to_tasks(
    records: Iterable[SwfRecord],
    ref_mips: float = 1000.0,
    clamp_range: tuple[float, float] = LENGTH_RANGE_MI,
    payload_b: float = DEFAULT_PAYLOAD_B,
) -> list[Task]:
    """Turn trace jobs into tasks of ``run_time * procs * ref_mips`` MI, clamped."""
    if not ref_mips > 0:
        raise ValueError("ref_mips must be > 0")
    lo, hi = clamp_range
    return [
        Task(
            id=i,
            length_mi=min(max(r.run_time_sec * r.allocated_procs * ref_mips, lo), hi),
            pes_number=1,
            file_size_b=payload_b,
            output_size_b=payload_b,
        )
        for i, r in enumerate(records)
    ]


@dataclass(frozen=True)
class SynthSpec:
    n_tasks: int = 200
    length_range_mi: tuple[float, float] = LENGTH_RANGE_MI
    vm_count_range: tuple[int, int] = (32, 64)
    mips_range: tuple[float, float] = (500.0, 10_000.0)
    ram_mb: float = 512.0
    storage_range_mb: tuple[float, float] = (3072.0, 10_240.0)
    bw_mbps: float = 1000.0
    payload_b: float = DEFAULT_PAYLOAD_B
    seed: int = 0

    def __post_init__(self):
        if self.n_tasks < 1 or self.vm_count_range[0] < 1:
            raise ValueError("task and VM counts must be >= 1")
        for lo, hi in (self.length_range_mi, self.vm_count_range, self.mips_range, self.storage_range_mb):
            if lo > hi:
                raise ValueError(f"range ({lo}, {hi}) is not ordered")
        if self.length_range_mi[0] <= 0 or self.mips_range[0] <= 0:
            raise ValueError("lengths and MIPS must be positive")


def synth_tasks(spec: SynthSpec) -> list[Task]:
    rng = np.random.default_rng([spec.seed, 0])
    lengths = rng.uniform(*spec.length_range_mi, spec.n_tasks)
    return [Task(i, float(x), 1, spec.payload_b, spec.payload_b) for i, x in enumerate(lengths)]


def build_vms(spec: SynthSpec) -> list[Vm]:
    """Random fleet, labelled in ascending MIPS order.

    The optimizers search a continuous VM-index space; ordering ids by speed
    puts similar machines at neighbouring indices.
    """
    rng = np.random.default_rng([spec.seed, 1])
    lo, hi = spec.vm_count_range
    m = int(rng.integers(lo, hi + 1))
    mips = rng.uniform(*spec.mips_range, m)
    storage = rng.uniform(*spec.storage_range_mb, m)
    order = np.argsort(mips, kind="stable")
    return [
        Vm(j, float(mips[k]), 1, spec.ram_mb, float(storage[k]), spec.bw_mbps) for j, k in enumerate(order)
    ]
