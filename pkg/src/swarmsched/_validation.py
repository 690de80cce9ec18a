"""Input validation for the estimator front end."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .model import Task, Vm

TASK_COLUMNS = ("length_mi", "file_size_b", "output_size_b")
VM_COLUMNS = ("mips", "ram_mb", "storage_mb", "bw_mbps")


def _entities_or_array(X, cls):
    if isinstance(X, (list, tuple)) and X and all(isinstance(x, cls) for x in X):
        return list(X), None
    arr = check_array(X, ensure_2d=False, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return None, arr


def check_tasks(X) -> list[Task]:
    """Tasks from a list of :class:`Task` or an ``(n, k)`` array.

    Array columns, in order: length (MI), input bytes, output bytes; missing
    trailing columns default to zero payload.
    """
    entities, arr = _entities_or_array(X, Task)
    if entities is not None:
        return entities
    if arr.shape[1] > len(TASK_COLUMNS):
        raise ValueError(f"task array has {arr.shape[1]} columns; expected at most {TASK_COLUMNS}")
    cols = np.zeros((arr.shape[0], len(TASK_COLUMNS)))
    cols[:, : arr.shape[1]] = arr
    return [Task(i, float(r[0]), 1, float(r[1]), float(r[2])) for i, r in enumerate(cols)]


def check_vms(V) -> list[Vm]:
    """VMs from a list of :class:`Vm` or an ``(m, k)`` array.

    Array columns, in order: MIPS, RAM (MB), storage (MB), bandwidth (Mbps);
    missing trailing columns take the :class:`Vm` defaults.
    """
    entities, arr = _entities_or_array(V, Vm)
    if entities is not None:
        return entities
    if arr.shape[1] > len(VM_COLUMNS):
        raise ValueError(f"VM array has {arr.shape[1]} columns; expected at most {VM_COLUMNS}")
    defaults = Vm(0, 1.0)
    out = []
    for j, row in enumerate(arr):
        fields = dict(zip(VM_COLUMNS, map(float, row)))
        out.append(
            Vm(
                j,
                fields["mips"],
                1,
                fields.get("ram_mb", defaults.ram_mb),
                fields.get("storage_mb", defaults.storage_mb),
                fields.get("bw_mbps", defaults.bw_mbps),
            )
        )
    return out
