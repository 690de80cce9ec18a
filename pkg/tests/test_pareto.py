import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmsched.model import ObjectiveVector
from swarmsched.pareto import (
    Archive,
    ArchiveEntry,
    archive_update,
    crowding_distances,
    dominates,
    leader_pool,
    msd_select,
    msd_values,
    nondominated_mask,
    pareto_ranks,
    select_leader,
)


def entry(obj, tag=0):
    return ArchiveEntry(np.array([tag]), ObjectiveVector(*map(float, obj)))


def brute_dominates(a, b):
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def brute_front(rows):
    rows = [tuple(r) for r in rows]
    return {r for r in rows if not any(brute_dominates(q, r) for q in rows)}


def brute_crowding(F):
    F = np.asarray(F, dtype=float)
    k, d = F.shape
    out = np.zeros(k)
    for j in range(d):
        order = sorted(range(k), key=lambda i: (F[i, j], i))
        out[order[0]] = out[order[-1]] = np.inf
        span = F[order[-1], j] - F[order[0], j]
        for pos in range(1, k - 1):
            if span > 0:
                out[order[pos]] += (F[order[pos + 1], j] - F[order[pos - 1], j]) / span
    return out


objs = st.tuples(*[st.integers(0, 6).map(float)] * 3)


def test_dominates_examples():
    assert dominates((1, 2, 3), (2, 2, 3))
    assert not dominates((1, 2, 3), (1, 2, 3))
    assert not dominates((1, 5, 0), (2, 4, 0)) and not dominates((2, 4, 0), (1, 5, 0))


@given(objs, objs)
def test_dominates_matches_definition(a, b):
    assert dominates(a, b) == brute_dominates(a, b)


def test_crowding_examples():
    cd = crowding_distances(np.array([[0, 2], [1, 1], [2, 0]], dtype=float))
    assert cd[1] == 2.0 and np.isinf(cd[0]) and np.isinf(cd[2])
    assert np.isinf(crowding_distances(np.array([[3.0, 4.0, 5.0]]))).all()
    same = crowding_distances(np.ones((4, 3)))
    assert np.isinf(same[[0, 3]]).all() and np.all(same[1:3] == 0)


@given(st.lists(objs, min_size=1, max_size=12, unique=True))
def test_crowding_matches_oracle(rows):
    F = np.array(rows)
    assert crowding_distances(F).tolist() == pytest.approx(brute_crowding(F).tolist())


def test_archive_update_examples():
    one = archive_update(Archive(), [entry((1, 2, 3))])
    assert [tuple(e.objectives) for e in one] == [(1, 2, 3)]
    a = archive_update(archive_update(Archive(), [entry((2, 2, 2))]), [entry((1, 1, 1))])
    assert [tuple(e.objectives) for e in a] == [(1, 1, 1)]


def test_truncation_removes_minimum_crowding():
    rng = np.random.default_rng(0)
    x = np.sort(rng.uniform(0, 1, 60))
    pts = np.column_stack([x, 1 - x, np.zeros(60)])
    cands = [entry(p, i) for i, p in enumerate(pts)]
    arch = archive_update(Archive(capacity=50), cands)
    assert len(arch) == 50
    F = arch.objectives()
    assert not nondominated_mask(F).sum() < 50
    # replay the removal: at each step the removed point must have had the minimum crowding
    alive = list(range(60))
    kept = {int(e.assignment[0]) for e in arch}
    while len(alive) > 50:
        cd = brute_crowding(pts[alive])
        victim = alive[int(np.argmin(cd))]
        assert victim not in kept
        alive.remove(victim)
    assert set(alive) == kept


def test_duplicates_keep_first():
    a = archive_update(Archive(), [entry((1, 1, 1), 7), entry((1, 1, 1), 8)])
    assert len(a) == 1 and a.entries[0].assignment[0] == 7
    b = archive_update(a, [entry((1, 1, 1), 9)])
    assert b.entries[0].assignment[0] == 7


@settings(max_examples=300, deadline=None)
@given(st.lists(st.lists(objs, min_size=1, max_size=15), min_size=1, max_size=5))
def test_batches_reproduce_brute_force_front(batches):
    arch = Archive(capacity=10**6)
    for b in batches:
        arch = archive_update(arch, [entry(o) for o in b])
    got = {tuple(e.objectives) for e in arch}
    assert got == brute_front([o for b in batches for o in b])
    assert len(got) == len(arch)


@settings(max_examples=200, deadline=None)
@given(st.lists(objs, min_size=1, max_size=40), st.integers(1, 8))
def test_bounded_archive_invariants(rows, cap):
    arch = archive_update(Archive(capacity=cap), [entry(o) for o in rows])
    F = arch.objectives()
    assert len(arch) <= cap
    assert not any(brute_dominates(p, q) for p, q in itertools.permutations(F.tolist(), 2))
    assert {tuple(r) for r in F.tolist()} <= brute_front(rows)


def test_pareto_ranks():
    F = np.array([[1, 1], [2, 2], [3, 3], [1, 3]], dtype=float)
    assert pareto_ranks(F).tolist() == [0, 1, 2, 1]


def test_leader_selection():
    single = archive_update(Archive(), [entry((1, 2, 3))])
    rng = np.random.default_rng(0)
    assert all(select_leader(single, rng) is single.entries[0] for _ in range(20))
    with pytest.raises(ValueError):
        select_leader(Archive(), rng)
    line = archive_update(Archive(), [entry((0, 2, 0)), entry((1, 1, 0)), entry((2, 0, 0))])
    pool = leader_pool(line)
    assert sorted(pool.tolist()) == [0, 1, 2]
    rng = np.random.default_rng(1)
    picks = [select_leader(line, rng) for _ in range(10_000)]
    boundary = np.mean([np.isinf(p.crowding) for p in picks])
    assert boundary == pytest.approx(2 / 3, abs=0.02)
    a = select_leader(line, np.random.default_rng(42))
    b = select_leader(line, np.random.default_rng(42))
    assert a is b


def test_leader_pool_prefers_isolated():
    x = np.linspace(0, 1, 30) ** 3
    arch = archive_update(Archive(), [entry((v, 1 - v, 0)) for v in x])
    cd = np.array([e.crowding for e in arch])
    pool = leader_pool(arch, 10)
    assert cd[pool].min() >= np.sort(cd)[-10]


def test_msd_examples():
    arch = [entry((10, 1, 100)), entry((20, 2, 50))]
    assert msd_values(np.array([e.objectives for e in arch])) == pytest.approx([1 / 3, 2 / 3])
    assert msd_select(arch) is arch[0]
    ideal = [entry((5, 5, 5)), entry((1, 1, 1)), entry((9, 0.5, 9))]
    assert msd_select(ideal) is ideal[1]
    assert msd_select([ideal[0]]) is ideal[0]
    with pytest.raises(ValueError):
        msd_select([])


def test_msd_tie_break_chain():
    # both rows have MSD 1/3; lower makespan wins
    tie = [entry((2, 0, 0)), entry((1, 1, 0))]
    assert msd_values(np.array([e.objectives for e in tie])).tolist() == [1 / 3, 1 / 3]
    assert msd_select(tie) is tie[1]
    # equal MSD and makespan; lower cost wins
    cost_tie = [entry((1, 0, 1)), entry((1, 1, 0))]
    assert msd_select(cost_tie) is cost_tie[1]
    same = [entry((1, 1, 1), 0), entry((1, 1, 1), 1)]
    assert msd_select(same) is same[0]
