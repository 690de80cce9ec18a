import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmsched.exceptions import InvalidWorkload
from swarmsched.model import (
    CostRates,
    ObjectiveVector,
    Task,
    Vm,
    Workload,
    bandwidth_cost,
    evaluate,
    execution_time,
    load_deviation,
    load_table,
    makespan,
    running_cost,
    throughput,
)

from conftest import ZERO_RATES, make_tasks, make_vms


def test_execution_time_hand_values():
    assert execution_time(Task(0, 1000), Vm(0, 100)) == 10.0
    assert execution_time(Task(0, 15000), Vm(0, 500)) == 30.0


@given(st.floats(1e-3, 1e9))
def test_execution_time_identity_ratio(x):
    assert execution_time(Task(0, x), Vm(0, x)) == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(length_mi=0), dict(length_mi=1, pes_number=0), dict(length_mi=1, file_size_b=-1), dict(length_mi=1, output_size_b=-1)],
)
def test_task_invariants(kwargs):
    with pytest.raises(ValueError):
        Task(0, **kwargs)


@pytest.mark.parametrize("field", ["mips", "ram_mb", "storage_mb", "bw_mbps"])
def test_vm_invariants(field):
    kwargs = dict(mips=1.0)
    kwargs[field] = 0.0
    with pytest.raises(ValueError):
        Vm(0, **kwargs)


def test_negative_rates_rejected():
    with pytest.raises(ValueError):
        CostRates(-1.0, 0.0, 0.0)


def test_load_table_hand_values(toy):
    tasks, vms, a = toy
    assert load_table(tasks, vms, a).tolist() == [10.0, 20.0]


def test_load_table_edge_cases():
    vms = make_vms([100, 200, 300])
    assert load_table([], vms, []).tolist() == [0.0, 0.0, 0.0]
    loads = load_table(make_tasks([100, 200]), vms, [0, 0])
    assert loads[1:].tolist() == [0.0, 0.0]


def test_load_table_rejects_out_of_range():
    with pytest.raises(ValueError):
        load_table(make_tasks([1]), make_vms([1]), [1])
    with pytest.raises(ValueError):
        load_table(make_tasks([1, 1]), make_vms([1]), [0])


def test_makespan():
    assert makespan([10, 20]) == 20
    assert makespan([4.5] * 5) == 4.5
    assert makespan([0, 0, 7]) == 7
    with pytest.raises(ValueError):
        makespan([])


def test_throughput():
    assert throughput(3, 20) == pytest.approx(0.15)
    assert throughput(0, 0) == 0
    assert throughput(500, 500) == 1.0
    with pytest.raises(ValueError):
        throughput(3, 0)


def test_load_deviation():
    assert load_deviation([10, 20]) == 5.0
    assert load_deviation([3, 3, 3]) == 0.0
    assert load_deviation([0, 0, 0, 12]) == pytest.approx(math.sqrt(27))


def test_running_cost():
    vm = make_vms([100])
    assert running_cost(vm, [10.0], CostRates(0.001, 0.0005, 10)) == pytest.approx(20.48)
    assert running_cost(vm, [0.0], CostRates()) == 0.0
    assert running_cost(vm, [10.0], CostRates(0, 0, 10)) == 0.0


def test_bandwidth_cost():
    tasks = [Task(0, 1, 1, 500_000, 500_000)]
    vms = make_vms([100])
    assert bandwidth_cost(tasks, vms, [0], CostRates()) == pytest.approx(0.08)
    assert bandwidth_cost(make_tasks([1, 2]), make_vms([1]), [0, 0], CostRates()) == 0.0
    assert bandwidth_cost(tasks, vms, [0], CostRates(0.001, 0.0005, 0)) == 0.0


def test_evaluate_composition(toy):
    tasks, vms, a = toy
    assert evaluate(tasks, vms, a, ZERO_RATES) == ObjectiveVector(20.0, 5.0, 0.0)


def test_evaluate_single_task_single_vm():
    t, v = Task(0, 1000, 1, 300, 300), Vm(0, 250, 1, 512, 3072, 1000)
    et = 4.0
    bw = 600 / (1000 * 1e6 / 8) * 10
    expected = (et, 0.0, et * (512 * 0.001 + 3072 * 0.0005) + bw)
    assert evaluate([t], [v], [0]) == pytest.approx(expected)


def test_evaluate_identical_vm_swap():
    tasks = make_tasks([100, 300, 50], payload=100)
    vms = make_vms([10, 10])
    assert evaluate(tasks, vms, [0, 1, 1]) == evaluate(tasks, vms, [1, 0, 0])


def test_workload_validation():
    with pytest.raises(InvalidWorkload):
        Workload([], make_vms([1]))
    with pytest.raises(InvalidWorkload):
        Workload(make_tasks([1]), [])
    with pytest.raises(InvalidWorkload):
        Workload(make_tasks([1]), [Vm(1, 1.0)])
    with pytest.raises(InvalidWorkload):
        Workload([Task(0, 1), Task(0, 2)], make_vms([1]))


instances = st.integers(1, 8).flatmap(
    lambda m: st.tuples(
        st.lists(st.floats(1, 1e6), min_size=1, max_size=12),
        st.lists(st.floats(1, 1e4), min_size=m, max_size=m),
        st.data(),
    )
)


def _draw(inst):
    lengths, mips, data = inst
    m = len(mips)
    a = data.draw(st.lists(st.integers(0, m - 1), min_size=len(lengths), max_size=len(lengths)))
    return make_tasks(lengths, payload=300), make_vms(mips), np.array(a), data


@settings(max_examples=200, deadline=None)
@given(instances)
def test_vectorized_evaluate_matches_entity_oracle(inst):
    tasks, vms, a, _ = _draw(inst)
    rates = CostRates()
    loads = load_table(tasks, vms, a)
    oracle = (
        makespan(loads),
        load_deviation(loads),
        running_cost(vms, loads, rates) + bandwidth_cost(tasks, vms, a, rates),
    )
    got = Workload(tasks, vms, rates).evaluate(a)
    assert got == pytest.approx(oracle, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(instances)
def test_permutation_invariance_and_bounds(inst):
    tasks, vms, a, data = _draw(inst)
    perm = data.draw(st.permutations(range(len(tasks))))
    permuted = [Task(k, tasks[i].length_mi, 1, 300, 300) for k, i in enumerate(perm)]
    base = evaluate(tasks, vms, a)
    assert evaluate(permuted, vms, a[list(perm)]) == pytest.approx(base, rel=1e-12)
    loads = load_table(tasks, vms, a)
    assert loads.sum() * (1 + 1e-12) >= makespan(loads) >= loads.mean() >= 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(1, 1e5), min_size=2, max_size=10), st.integers(2, 5), st.data())
def test_moving_from_argmax_to_lower_identical_vm(lengths, m, data):
    tasks, vms = make_tasks(lengths), make_vms([100.0] * m)
    a = np.array(data.draw(st.lists(st.integers(0, m - 1), min_size=len(lengths), max_size=len(lengths))))
    loads = load_table(tasks, vms, a)
    src = int(np.argmax(loads))
    dst = int(np.argmin(loads))
    on_src = np.flatnonzero(a == src)
    if loads[dst] >= loads[src] or len(on_src) == 0:
        return
    i = on_src[data.draw(st.integers(0, len(on_src) - 1))]
    moved = a.copy()
    moved[i] = dst
    if loads[dst] + execution_time(tasks[i], vms[dst]) <= loads[src]:
        assert makespan(load_table(tasks, vms, moved)) <= makespan(loads)


def test_batch_and_single_evaluation_bit_identical():
    rng = np.random.default_rng(3)
    wl = Workload(make_tasks(rng.uniform(1e4, 5e5, 40), 300), make_vms(rng.uniform(500, 1e4, 7)))
    A = rng.integers(0, 7, (30, 40))
    F = wl.evaluate_many(A)
    for a, row in zip(A, F):
        assert tuple(wl.evaluate(a)) == tuple(row)


def test_evaluate_is_pure(toy):
    tasks, vms, a = toy
    before = a.copy()
    assert evaluate(tasks, vms, a) == evaluate(tasks, vms, a)
    assert np.array_equal(a, before)
