import math
import random
from itertools import permutations

import numpy as np
import pytest

from iidmatch.baselines import DUMMY
from iidmatch.graph import TypeGraph
from iidmatch.policies import (BrubachPolicy, JailletLuPolicy,
                               brubach_distributions, break_cycles,
                               gandhi_round, jaillet_lu_fractional,
                               jl_distributions, second_modification)
from iidmatch.policies.lists import TypeListDistribution, _distribution
from iidmatch.policies.rounding import X1, X2
from iidmatch.rng import Xoshiro256


def test_jl_single_edge_two_thirds():
    tg = TypeGraph.from_lists([[0]], right_count=1)
    rows = jaillet_lu_fractional(tg)
    assert rows[0].tolist() == [2]


def test_jl_k22_objective_and_sums():
    tg = TypeGraph.from_lists([[0, 1], [0, 1]], right_count=2)
    rows = jaillet_lu_fractional(tg)
    total = sum(int(r.sum()) for r in rows)
    assert total == 6  # objective 2 after the 1/3 rescale
    for r in rows:
        assert r.sum() == 3
    per_right = np.zeros(2, dtype=int)
    for t, vals in enumerate(rows):
        for r, v in zip(tg.adj[t], vals):
            per_right[int(r)] += int(v)
    assert per_right.tolist() == [3, 3]


def test_jl_values_are_thirds_on_random_graphs():
    rng = random.Random(41)
    for _ in range(500):
        left = rng.randint(1, 10)
        right = rng.randint(1, 10)
        adj = [[r for r in range(right) if rng.random() < 0.4]
               for _ in range(left)]
        tg = TypeGraph.from_lists(adj, right_count=right)
        rows = jaillet_lu_fractional(tg)
        for vals in rows:
            assert np.all((vals >= 0) & (vals <= 2))
            assert vals.sum() <= 3


def test_jl_distribution_two_neighbors():
    tg = TypeGraph.from_lists([[3, 5]], right_count=6)
    dist = jl_distributions(tg, [np.array([2, 1])])
    probs = dict(zip(dist[0].lists, np.diff(np.concatenate([[0.0], dist[0].cumprob]))))
    assert abs(probs[(3, 5)] - 2 / 3) < 1e-12
    assert abs(probs[(5, 3)] - 1 / 3) < 1e-12


def test_jl_distribution_three_neighbors_uniform():
    tg = TypeGraph.from_lists([[0, 1, 2]], right_count=3)
    dist = jl_distributions(tg, [np.array([1, 1, 1])])
    assert len(dist[0].lists) == 6
    probs = np.diff(np.concatenate([[0.0], dist[0].cumprob]))
    assert np.allclose(probs, 1 / 6)


def test_jl_distribution_dummy_added():
    tg = TypeGraph.from_lists([[4]], right_count=5)
    dist = jl_distributions(tg, [np.array([2])])
    probs = dict(zip(dist[0].lists, np.diff(np.concatenate([[0.0], dist[0].cumprob]))))
    assert abs(probs[(4, DUMMY)] - 2 / 3) < 1e-12
    assert abs(probs[(DUMMY, 4)] - 1 / 3) < 1e-12


def test_jl_distribution_rejects_overfull():
    tg = TypeGraph.from_lists([[0, 1, 2, 3]], right_count=4)
    with pytest.raises(ValueError):
        jl_distributions(tg, [np.array([1, 1, 1, 1])])


def test_rla_sampling_matches_distribution():
    dist = _distribution([((0,), 0.2), ((1,), 0.5), ((2,), 0.3)])
    rng = Xoshiro256(55)
    n = 50_000
    counts = np.zeros(3)
    for _ in range(n):
        counts[dist.sample(rng)[0]] += 1
    assert np.all(np.abs(counts / n - [0.2, 0.5, 0.3]) < 0.02)


def test_gandhi_integral_input_unchanged():
    left = np.array([0, 1])
    right = np.array([0, 1])
    vals = np.array([2.0, 1.0])
    out = gandhi_round(left, right, vals, Xoshiro256(1))
    assert out.tolist() == [2, 1]


def test_gandhi_two_edge_path_splits_evenly():
    # edges (t0, r0) and (t1, r0), both 1.5: rounds to (2,1) or (1,2)
    left = np.array([0, 1])
    right = np.array([0, 0])
    rng = Xoshiro256(2)
    counts = {(2, 1): 0, (1, 2): 0}
    for _ in range(4000):
        out = tuple(gandhi_round(left, right, np.array([1.5, 1.5]), rng).tolist())
        counts[out] += 1
    assert counts[(2, 1)] + counts[(1, 2)] == 4000
    assert abs(counts[(2, 1)] - 2000) < 3.5 * math.sqrt(4000 * 0.25)


def fixed_six_node_instance():
    # 3 types x 2 offline nodes with a mix of fractional values
    left = np.array([0, 0, 1, 1, 2, 2])
    right = np.array([0, 1, 0, 1, 0, 1])
    vals = np.array([0.9, 0.6, 0.3, 1.2, 0.8, 0.4])
    return left, right, vals


def test_gandhi_entries_floor_or_ceil():
    left, right, vals = fixed_six_node_instance()
    rng = Xoshiro256(3)
    for _ in range(500):
        out = gandhi_round(left, right, vals, rng)
        assert np.all((out == np.floor(vals)) | (out == np.ceil(vals)))


def test_gandhi_node_sums_floor_or_ceil():
    left, right, vals = fixed_six_node_instance()
    rng = Xoshiro256(4)
    for _ in range(500):
        out = gandhi_round(left, right, vals, rng)
        for nodes, ids in ((left, [0, 1, 2]), (right, [0, 1])):
            for x in ids:
                frac_sum = float(vals[nodes == x].sum())
                int_sum = int(out[nodes == x].sum())
                assert int_sum in (math.floor(frac_sum + 1e-9),
                                   math.ceil(frac_sum - 1e-9))


def test_gandhi_marginals_preserved():
    left, right, vals = fixed_six_node_instance()
    rng = Xoshiro256(5)
    total = np.zeros(len(vals))
    n = 20_000
    for _ in range(n):
        total += gandhi_round(left, right, vals, rng)
    assert np.all(np.abs(total / n - vals) < 0.02)


def test_break_cycles_c2():
    # one 2/3 edge and three 1/3 edges on a 4-cycle
    left = np.array([0, 0, 1, 1])
    right = np.array([0, 1, 0, 1])
    thirds = np.array([2, 1, 1, 1])
    out = break_cycles(left, right, thirds)
    assert out.tolist() == [1, 2, 2, 0]


def test_break_cycles_c3():
    left = np.array([0, 0, 1, 1])
    right = np.array([0, 1, 0, 1])
    out = break_cycles(left, right, np.array([1, 1, 1, 1]))
    assert out.tolist() == [2, 0, 0, 2]


def test_break_cycles_c1_untouched():
    left = np.array([0, 0, 1, 1])
    right = np.array([0, 1, 0, 1])
    thirds = np.array([2, 1, 1, 2])
    out = break_cycles(left, right, thirds)
    assert out.tolist() == [2, 1, 1, 2]


def test_break_cycles_preserves_node_totals():
    rng = random.Random(42)
    for _ in range(200):
        lc, rc = rng.randint(2, 8), rng.randint(2, 8)
        edges = [(t, r) for t in range(lc) for r in range(rc)]
        rng.shuffle(edges)
        left, right, thirds = [], [], []
        left_sum = [0] * lc
        right_sum = [0] * rc
        for t, r in edges:
            w = rng.choice([0, 1, 1, 2])
            if w and left_sum[t] + w <= 3 and right_sum[r] + w <= 3:
                left.append(t)
                right.append(r)
                thirds.append(w)
                left_sum[t] += w
                right_sum[r] += w
        left = np.array(left, dtype=int)
        right = np.array(right, dtype=int)
        thirds = np.array(thirds, dtype=int)
        out = break_cycles(left, right, thirds)
        for t in range(lc):
            assert out[left == t].sum() == thirds[left == t].sum()
        for r in range(rc):
            assert out[right == r].sum() == thirds[right == r].sum()


def second_mod_single_type(weights, extra=()):
    """One type with the given edge weights; ``extra`` adds other types'
    edges to shape the offline totals."""
    lefts = [0] * len(weights) + [t for t, _, _ in extra]
    rights = list(range(len(weights))) + [r for _, r, _ in extra]
    thirds = list(weights) + [w for _, _, w in extra]
    out = second_modification(np.array(lefts), np.array(rights),
                              np.array(thirds), right_count=max(rights) + 1)
    return out[:len(weights)]


def test_second_mod_thin_third_thick_full():
    # thin edge to a total-1/3 node, thick edge to a saturated node
    got = second_mod_single_type([1, 2], extra=[(1, 1, 1)])
    assert np.allclose(got, [0.1, 0.9])


def test_second_mod_thin_two_thirds_thick_full():
    got = second_mod_single_type([1, 2], extra=[(1, 0, 1), (1, 1, 1)])
    assert np.allclose(got, [0.15, 0.85])


def test_second_mod_no_match_keeps_h():
    got = second_mod_single_type([1])
    assert np.allclose(got, [1 / 3])


def test_second_mod_x1_case():
    # thick to saturated r0, thin to saturated r1 whose remainder is thick
    got = second_mod_single_type([2, 1], extra=[(1, 0, 1), (1, 1, 2)])
    assert np.allclose(got, [1 - X1, X1])


def test_second_mod_x2_case():
    # same, but r1 is filled by two other thin edges
    got = second_mod_single_type([2, 1],
                                 extra=[(1, 0, 1), (1, 1, 1), (2, 1, 1)])
    assert np.allclose(got, [1 - X2, X2])


def test_second_mod_three_thin_cases():
    got = second_mod_single_type([1, 1, 1],
                                 extra=[(1, 1, 2), (2, 2, 2)])
    assert np.allclose(got, [0.1, 0.45, 0.45])
    got = second_mod_single_type([1, 1, 1],
                                 extra=[(1, 0, 1), (1, 1, 2), (2, 2, 2)])
    assert np.allclose(got, [0.2, 0.4, 0.4])


def test_second_mod_row_sums_bounded():
    rng = random.Random(43)
    for _ in range(100):
        lc, rc = rng.randint(1, 6), rng.randint(1, 6)
        left, right, thirds = [], [], []
        lsum = [0] * lc
        rsum = [0] * rc
        for t in range(lc):
            for r in range(rc):
                w = rng.choice([0, 0, 1, 2])
                if w and lsum[t] + w <= 3 and rsum[r] + w <= 3:
                    left.append(t)
                    right.append(r)
                    thirds.append(w)
                    lsum[t] += w
                    rsum[r] += w
        if not left:
            continue
        out = second_modification(np.array(left), np.array(right),
                                  np.array(thirds), rc)
        for t in range(lc):
            assert out[np.array(left) == t].sum() <= 1 + 1e-9


def test_brubach_distribution_two_neighbors():
    tg = TypeGraph.from_lists([[0, 1]], right_count=2)
    dist = brubach_distributions(tg, [np.array([0.25, 0.75])])
    probs = dict(zip(dist[0].lists, np.diff(np.concatenate([[0.0], dist[0].cumprob]))))
    assert abs(probs[(0, 1)] - 0.25) < 1e-12
    assert abs(probs[(1, 0)] - 0.75) < 1e-12


def test_brubach_distribution_three_neighbors_vs_enumeration():
    tg = TypeGraph.from_lists([[0, 1, 2]], right_count=3)
    h = np.array([0.25, 0.25, 0.5])
    dist = brubach_distributions(tg, [h])
    probs = dict(zip(dist[0].lists, np.diff(np.concatenate([[0.0], dist[0].cumprob]))))
    weights = {}
    for i, j, k in permutations(range(3)):
        weights[(i, j, k)] = h[i] * h[j] / (h[j] + h[k])
    z = sum(weights.values())
    for perm, w in weights.items():
        assert abs(probs[perm] - w / z) < 1e-12


def test_brubach_distribution_single_neighbor():
    tg = TypeGraph.from_lists([[1]], right_count=2)
    dist = brubach_distributions(tg, [np.array([0.4])])
    assert dist[0].lists == [(1,)]


def test_brubach_policy_end_to_end_suggestions_valid():
    policy = BrubachPolicy()
    rng = random.Random(44)
    for seed in range(20):
        left = rng.randint(1, 7)
        right = rng.randint(1, 7)
        adj = [[r for r in range(right) if rng.random() < 0.5]
               for _ in range(left)]
        tg = TypeGraph.from_lists(adj, right_count=right)
        state = policy.preprocess(tg, Xoshiro256(seed))
        srng = Xoshiro256(seed + 100)
        for t in range(left):
            for _ in range(20):
                out = policy.suggest(state, t, 1, srng)
                for r in out:
                    assert r in set(int(x) for x in tg.adj[t])


def test_jaillet_policy_end_to_end_suggestions_valid():
    policy = JailletLuPolicy()
    rng = random.Random(45)
    for seed in range(20):
        left = rng.randint(1, 7)
        right = rng.randint(1, 7)
        adj = [[r for r in range(right) if rng.random() < 0.5]
               for _ in range(left)]
        tg = TypeGraph.from_lists(adj, right_count=right)
        state = policy.preprocess(tg, Xoshiro256(seed))
        srng = Xoshiro256(seed + 100)
        for t in range(left):
            for _ in range(20):
                out = policy.suggest(state, t, 1, srng)
                for r in out:
                    assert r == DUMMY or r in set(int(x) for x in tg.adj[t])
