"""scikit-learn style front end.

>>> sched = ParetoScheduler(max_iter=20, random_state=0).fit(task_lengths, vm_mips)
>>> sched.assignment_        # chosen VM per task
>>> sched.frontier_          # (k, 3) objective rows of the Pareto archive
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from ._validation import check_tasks, check_vms
from .baselines import run_algorithm
from .engine import EngineConfig
from .model import CostRates, Workload


class ParetoScheduler(BaseEstimator):
    """Multi-objective task-to-VM scheduler.

    Parameters
    ----------
    algorithm : {"phwsoa", "woa", "soa", "ga", "random"}, default="phwsoa"
    pop_size : int, default=50
        Agents per species.
    max_iter : int, default=100
    pm : float, default=0.05
        Mutation probability.
    archive_capacity : int, default=50
    leader_pool : int, default=10
        Leaders are drawn from this many least-crowded archive entries.
    parallelism : int, default=1
        Worker threads for schedule evaluation; results do not depend on it.
    batch_timeout : float, default=60.0
        Seconds allowed per evaluation batch.
    prices : tuple of float, default=(0.001, 0.0005, 10.0)
        Price triple ``(ram_per_mb_s, storage_per_mb_s, bw_per_s)``.
    equalize : bool, default=True
        Double the population of single-species baselines to match the hybrid's budget.
    random_state : int, RandomState or None, default=None

    Attributes
    ----------
    assignment_ : ndarray of shape (n_tasks,)
        VM index chosen for each task.
    objectives_ : ObjectiveVector
    frontier_ : ndarray of shape (k, 3)
    frontier_assignments_ : ndarray of shape (k, n_tasks)
    result_ : RunResult
    n_tasks_in_, n_vms_ : int
    """

    def __init__(
        self,
        algorithm="phwsoa",
        pop_size=50,
        max_iter=100,
        pm=0.05,
        archive_capacity=50,
        leader_pool=10,
        parallelism=1,
        batch_timeout=60.0,
        prices=(0.001, 0.0005, 10.0),
        equalize=True,
        random_state=None,
    ):
        self.algorithm = algorithm
        self.pop_size = pop_size
        self.max_iter = max_iter
        self.pm = pm
        self.archive_capacity = archive_capacity
        self.leader_pool = leader_pool
        self.parallelism = parallelism
        self.batch_timeout = batch_timeout
        self.prices = prices
        self.equalize = equalize
        self.random_state = random_state

    def _seed(self) -> int:
        if isinstance(self.random_state, (int, np.integer)):
            return int(self.random_state)
        return int(check_random_state(self.random_state).randint(np.iinfo(np.int32).max))

    def fit(self, X, vms):
        """Optimize the schedule of tasks ``X`` on the fleet ``vms``.

        ``X`` is a list of Task or an array with columns
        (length MI[, input bytes[, output bytes]]); ``vms`` is a list of Vm
        or an array with columns (MIPS[, RAM MB[, storage MB[, bandwidth Mbps]]]).
        """
        tasks = check_tasks(X)
        fleet = check_vms(vms)
        config = EngineConfig(
            pop_size=self.pop_size,
            max_iter=self.max_iter,
            pm=self.pm,
            seed=self._seed(),
            parallelism=self.parallelism,
            batch_timeout=self.batch_timeout,
            archive_capacity=self.archive_capacity,
            leader_pool=self.leader_pool,
        )
        self.rates_ = CostRates(*self.prices)
        result = run_algorithm(self.algorithm, tasks, fleet, config, self.rates_, equalize=self.equalize)
        self.result_ = result
        self.assignment_ = result.chosen.assignment.copy()
        self.objectives_ = result.chosen.objectives
        self.frontier_ = result.frontier.objectives()
        self.frontier_assignments_ = np.array([e.assignment for e in result.frontier.entries])
        self.n_tasks_in_ = len(tasks)
        self.n_vms_ = len(fleet)
        self._workload = Workload(tasks, fleet, self.rates_)
        return self

    def predict(self, X=None):
        """The chosen assignment for the fitted task set."""
        check_is_fitted(self, "assignment_")
        if X is not None and len(check_tasks(X)) != self.n_tasks_in_:
            raise ValueError(f"fitted on {self.n_tasks_in_} tasks, got {len(check_tasks(X))}")
        return self.assignment_.copy()

    def fit_predict(self, X, vms):
        return self.fit(X, vms).predict()

    def transform(self, assignments):
        """Objective rows for one or more assignments of the fitted workload."""
        check_is_fitted(self, "assignment_")
        A = np.atleast_2d(np.asarray(assignments, dtype=np.int64))
        if A.shape[1] != self.n_tasks_in_ or A.min() < 0 or A.max() >= self.n_vms_:
            raise ValueError("assignments do not match the fitted workload")
        return self._workload.evaluate_many(A)
