"""Front-quality oracles: exhaustive fronts and the scalars that compare fronts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InstanceTooLarge, InvalidReference
from .model import CostRates, ObjectiveVector, Task, Vm, Workload

ENUMERATION_GUARD = 10**6
REFERENCE_SCALE = 1.1
_CHUNK = 1 << 15


@dataclass(frozen=True)
class FrontQuality:
    hypervolume: float
    coverage_of_true_front: float


def _nondominated_sorted(F: np.ndarray) -> np.ndarray:
    """Unique non-dominated rows of ``F`` via a lexicographic sweep."""
    F = np.unique(F, axis=0)  # also sorts rows lexicographically
    front: list[np.ndarray] = []
    for row in F:
        if front:
            P = np.asarray(front)
            # lexicographic order means only earlier rows can dominate this one
            if np.any(np.all(P <= row, axis=1)):
                continue
        front.append(row)
    return np.asarray(front).reshape(-1, F.shape[1])


def brute_force_front(
    tasks: Sequence[Task], vms: Sequence[Vm], rates: CostRates | None = None, guard: int = ENUMERATION_GUARD
) -> list[ObjectiveVector]:
    """Exact Pareto front by enumerating every one of the ``m**n`` assignments."""
    n, m = len(tasks), len(vms)
    if m**n > guard:
        raise InstanceTooLarge(f"{m}^{n} assignments exceed the enumeration guard of {guard}")
    wl = Workload(tasks, vms, rates)
    product = itertools.product(range(m), repeat=n)
    front = np.empty((0, 3))
    while True:
        block = np.array(list(itertools.islice(product, _CHUNK)), dtype=np.int64).reshape(-1, n)
        if len(block) == 0:
            break
        front = _nondominated_sorted(np.vstack([front, wl.evaluate_many(block)]))
    return [ObjectiveVector(*row) for row in front.tolist()]


def _hv2d(P: np.ndarray, ref: np.ndarray) -> float:
    P = P[np.lexsort((P[:, 1], P[:, 0]))]
    area, best_y = 0.0, ref[1]
    xs = np.append(P[:, 0], ref[0])
    for i, (x, y) in enumerate(P):
        best_y = min(best_y, y)
        area += (xs[i + 1] - x) * (ref[1] - best_y)
    return area


def hypervolume(front, ref) -> float:
    """Volume dominated by ``front`` and bounded by ``ref`` (minimization, 1 to 3 objectives)."""
    ref = np.asarray(ref, dtype=float)
    P = np.asarray(front, dtype=float).reshape(-1, ref.size)
    if len(P) == 0:
        return 0.0
    if np.any(P > ref):
        raise InvalidReference("every front point must be <= the reference point component-wise")
    if ref.size == 1:
        return float(ref[0] - P[:, 0].min())
    if ref.size == 2:
        return float(_hv2d(P, ref))
    if ref.size != 3:
        raise ValueError("hypervolume supports at most 3 objectives")
    levels = np.unique(P[:, 2])
    bounds = np.append(levels, ref[2])
    volume = 0.0
    for k, z in enumerate(levels):
        volume += _hv2d(P[P[:, 2] <= z][:, :2], ref[:2]) * (bounds[k + 1] - z)
    return float(volume)


def reference_point(*fronts) -> np.ndarray:
    """``1.1 *`` the component-wise maximum over all given fronts.

    A component whose maximum is not positive gets 1.0, so that degenerate
    fronts (e.g. a perfectly balanced single schedule) still enclose volume.
    """
    stacked = np.vstack([np.asarray(f, dtype=float).reshape(-1, 3) for f in fronts])
    peak = stacked.max(axis=0)
    return np.where(peak > 0, REFERENCE_SCALE * peak, 1.0)


def coverage(front, true_front, rtol: float = 1e-9) -> float:
    """Fraction of ``true_front`` points reproduced by ``front``."""
    T = np.asarray(true_front, dtype=float).reshape(-1, 3)
    P = np.asarray(front, dtype=float).reshape(-1, 3)
    if len(T) == 0:
        return 1.0
    if len(P) == 0:
        return 0.0
    hit = [np.any(np.all(np.isclose(P, t, rtol=rtol, atol=0.0), axis=1)) for t in T]
    return float(np.mean(hit))


def front_quality(front, true_front, ref) -> FrontQuality:
    return FrontQuality(hypervolume(front, ref), coverage(front, true_front))
