"""Multi-objective cloud task scheduling with a hybrid whale/seagull swarm."""

from .baselines import GaConfig, run_algorithm, run_baseline
from .engine import Engine, EngineConfig, RunResult, run
from .estimator import ParetoScheduler
from .exceptions import (
    EmptyTrace,
    InstanceTooLarge,
    InvalidReference,
    InvalidWorkload,
    SwarmSchedError,
    TimeoutExceeded,
    UnsupportedKind,
)
from .model import CostRates, ObjectiveVector, Task, Vm, Workload, evaluate
from .pareto import Archive, ArchiveEntry, archive_update, msd_select
from .workload import SynthSpec, build_vms, parse_swf, swf_to_tasks, synth_tasks

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "ArchiveEntry",
    "CostRates",
    "EmptyTrace",
    "Engine",
    "EngineConfig",
    "GaConfig",
    "InstanceTooLarge",
    "InvalidReference",
    "InvalidWorkload",
    "ObjectiveVector",
    "ParetoScheduler",
    "RunResult",
    "SwarmSchedError",
    "SynthSpec",
    "Task",
    "TimeoutExceeded",
    "UnsupportedKind",
    "Vm",
    "Workload",
    "archive_update",
    "build_vms",
    "evaluate",
    "msd_select",
    "parse_swf",
    "run",
    "run_algorithm",
    "run_baseline",
    "swf_to_tasks",
    "synth_tasks",
]
