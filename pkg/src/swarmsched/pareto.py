"""Pareto dominance, the bounded non-dominated archive and final-choice rules."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .model import ObjectiveVector

DEFAULT_CAPACITY = 50
DEFAULT_LEADER_POOL = 10


@dataclass(frozen=True)
class ArchiveEntry:
    assignment: np.ndarray
    objectives: ObjectiveVector
    crowding: float = float("inf")


@dataclass(frozen=True)
class Archive:
    entries: tuple[ArchiveEntry, ...] = ()
    capacity: int = DEFAULT_CAPACITY

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def objectives(self) -> np.ndarray:
        return objective_matrix(self.entries)

    def minima(self) -> np.ndarray:
        """Component-wise minimum objective over the archive."""
        return self.objectives().min(axis=0)


def objective_matrix(entries: Sequence[ArchiveEntry]) -> np.ndarray:
    if not entries:
        return np.empty((0, 3))
    return np.array([e.objectives for e in entries], dtype=float)


def dominates(a, b) -> bool:
    """True when ``a`` is no worse than ``b`` everywhere and better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def domination_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when row ``i`` dominates row ``j``."""
    le = (F[:, None, :] <= F[None, :, :]).all(axis=2)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=2)
    return le & lt


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if len(F) == 0:
        return np.zeros(0, dtype=bool)
    return ~domination_matrix(F).any(axis=0)


def pareto_ranks(F: np.ndarray) -> np.ndarray:
    """Non-domination rank of each row, 0 for the first front."""
    F = np.asarray(F, dtype=float)
    dom = domination_matrix(F)
    ranks = np.full(len(F), -1)
    remaining = np.ones(len(F), dtype=bool)
    rank = 0
    while remaining.any():
        dominated = dom[remaining][:, remaining].any(axis=0)
        front = np.flatnonzero(remaining)[~dominated]
        ranks[front] = rank
        remaining[front] = False
        rank += 1
    return ranks


def crowding_distances(entries) -> np.ndarray:
    """Normalized-span crowding distance per entry; boundary points get +inf.

    Accepts archive entries or a ``(k, d)`` objective array.
    """
    F = entries if isinstance(entries, np.ndarray) else objective_matrix(list(entries))
    k = len(F)
    dist = np.zeros(k)
    if k == 0:
        return dist
    for col in F.T:
        order = np.argsort(col, kind="stable")
        dist[order[0]] = dist[order[-1]] = np.inf
        span = col[order[-1]] - col[order[0]]
        if k > 2 and span > 0:
            dist[order[1:-1]] += (col[order[2:]] - col[order[:-2]]) / span
    return dist


def _truncate(F: np.ndarray, capacity: int) -> np.ndarray:
    """Indices kept after removing minimum-crowding rows one at a time."""
    keep = np.arange(len(F))
    while len(keep) > capacity:
        cd = crowding_distances(F[keep])
        keep = np.delete(keep, int(np.argmin(cd)))
    return keep


def archive_update(archive: Archive, candidates: Iterable[ArchiveEntry]) -> Archive:
    """Merge candidates into the archive and return the new bounded frontier.

    Merge order is archive first, then candidates in the given order;
    when two entries share an objective vector the earlier one is kept.
    """
    merged: list[ArchiveEntry] = []
    seen = set()
    for entry in (*archive.entries, *candidates):
        key = tuple(entry.objectives)
        if key not in seen:
            seen.add(key)
            merged.append(entry)
    if not merged:
        return archive
    F = objective_matrix(merged)
    idx = np.flatnonzero(nondominated_mask(F))
    F = F[idx]
    keep = _truncate(F, archive.capacity)
    cd = crowding_distances(F[keep])
    entries = tuple(replace(merged[idx[i]], crowding=float(c)) for i, c in zip(keep, cd))
    return Archive(entries, archive.capacity)


def leader_pool(archive: Archive, top_k: int = DEFAULT_LEADER_POOL) -> np.ndarray:
    """Indices of the ``top_k`` least crowded entries, most isolated first."""
    if len(archive) == 0:
        raise ValueError("cannot pick a leader from an empty archive")
    cd = np.array([e.crowding for e in archive.entries])
    return np.argsort(-cd, kind="stable")[: min(top_k, len(cd))]


def select_leader(archive: Archive, rng: np.random.Generator, top_k: int = DEFAULT_LEADER_POOL) -> ArchiveEntry:
    pool = leader_pool(archive, top_k)
    return archive.entries[pool[rng.integers(len(pool))]]


def msd_values(F: np.ndarray) -> np.ndarray:
    """Mean squared min-max normalized objective value per row."""
    F = np.asarray(F, dtype=float)
    lo, hi = F.min(axis=0), F.max(axis=0)
    span = hi - lo
    norm = np.divide(F - lo, span, out=np.zeros_like(F), where=span > 0)
    return np.mean(norm**2, axis=1)


def msd_select(archive: Archive | Sequence[ArchiveEntry]) -> ArchiveEntry:
    """The balanced compromise entry: lowest MSD, then makespan, cost, position."""
    entries = list(archive)
    if not entries:
        raise ValueError("cannot select from an empty archive")
    F = objective_matrix(entries)
    msd = msd_values(F)
    order = np.lexsort((np.arange(len(entries)), F[:, 2], F[:, 0], msd))
    return entries[order[0]]
