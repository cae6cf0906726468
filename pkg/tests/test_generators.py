import math
import random

import numpy as np
import pytest

from iidmatch.generators import (FamilySpec, GeneralGraph, ParamError,
                                 convert_duplicating, convert_random_partition,
                                 gen_erdos_renyi, gen_left_regular,
                                 gen_molloy_reed, gen_pref_attach,
                                 gen_right_regular, gen_stand_alone, generate,
                                 plcutoff_cdf, sample_degree_plcutoff)
from iidmatch.graph import validate_type_graph
from iidmatch.rng import Xoshiro256


ALL_SPECS = [
    FamilySpec("erdos_renyi", 40, c=3.0),
    FamilySpec("left_regular", 40, d=4),
    FamilySpec("right_regular", 40, d=4),
    FamilySpec("molloy_reed", 40, tau=1.5, kappa=10.0),
    FamilySpec("pref_attach", 40, c=3.0),
    FamilySpec("ut", 40),
    FamilySpec("mh", 40),
    FamilySpec("fh", 40),
    FamilySpec("fewg", 64),
    FamilySpec("manyg", 256),
    FamilySpec("rope", 36),
    FamilySpec("hexa", 36),
    FamilySpec("zipf", 40),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family)
def test_every_generator_output_validates(spec):
    tg = generate(spec)
    assert validate_type_graph(tg) is None
    assert tg.m >= 0


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family)
def test_generators_deterministic(spec):
    a = generate(spec)
    b = generate(spec)
    assert a.m == b.m and a.left_count == b.left_count
    assert all(np.array_equal(x, y) for x, y in zip(a.adj, b.adj))


def test_erdos_renyi_c_zero_empty():
    tg = gen_erdos_renyi(50, 0.0, Xoshiro256(1))
    assert tg.edge_count() == 0


def test_erdos_renyi_edge_count_binomial():
    n, c = 1000, 5.0
    mean = n * n * (c / n)
    sigma = math.sqrt(n * n * (c / n) * (1 - c / n))
    for seed in range(5):
        tg = gen_erdos_renyi(n, c, Xoshiro256(seed))
        assert abs(tg.edge_count() - mean) < 4 * sigma


def test_left_regular_degrees():
    tg = gen_left_regular(30, 5, Xoshiro256(2))
    assert all(len(a) == 5 for a in tg.adj)
    assert gen_left_regular(10, 10, Xoshiro256(3)).edge_count() == 100
    assert gen_left_regular(10, 0, Xoshiro256(3)).edge_count() == 0
    with pytest.raises(ParamError):
        gen_left_regular(10, 11, Xoshiro256(4))


def test_right_regular_degrees():
    tg = gen_right_regular(30, 5, Xoshiro256(5))
    assert tg.degrees_right().tolist() == [5] * 30


def test_plcutoff_zero_excluded_and_concentration():
    cdf = plcutoff_cdf(4.0, 1.0, 100)
    # P(1) directly from the normalization
    d = np.arange(1, 101, dtype=float)
    w = d ** -4.0 * np.exp(-d / 1.0)
    assert cdf[0] == pytest.approx(w[0] / w.sum())
    assert cdf[0] > 0.9
    rng = Xoshiro256(6)
    assert all(sample_degree_plcutoff(4.0, 1.0, 100, rng, cdf) >= 1
               for _ in range(1000))


def test_plcutoff_empirical_tv_distance():
    tau, kappa, nmax = 1.5, 8.0, 50
    cdf = plcutoff_cdf(tau, kappa, nmax)
    pmf = np.diff(np.concatenate([[0.0], cdf]))
    rng = Xoshiro256(7)
    n = 100_000
    counts = np.zeros(nmax)
    for _ in range(n):
        counts[sample_degree_plcutoff(tau, kappa, nmax, rng, cdf) - 1] += 1
    tv = 0.5 * np.abs(counts / n - pmf).sum()
    assert tv < 0.02


def test_molloy_reed_outputs_are_simple_and_valid():
    for seed in range(50):
        tg = gen_molloy_reed(30, 1.0, 8.0, Xoshiro256(seed))
        assert validate_type_graph(tg) is None
        assert tg.m == tg.left_count == 15


def test_pref_attach_c_zero_empty():
    tg = gen_pref_attach(20, 0.0, Xoshiro256(8))
    assert tg.edge_count() == 0


def uniform_attach_max_degree(n, c, rng):
    """Control model: same per-type neighbor counts, uniform attachment."""
    from iidmatch.rng import binomial_cdf, sample_cdf
    cdf = binomial_cdf(n, c / n)
    deg = np.zeros(n, dtype=int)
    for _ in range(n):
        z = sample_cdf(cdf, rng)
        chosen = rng.sample_distinct(n, z)
        deg[chosen] += 1
    return deg.max()


def test_pref_attach_rich_get_richer():
    n, c = 200, 3.0
    wins = 0
    seeds = 100
    for seed in range(seeds):
        pa = gen_pref_attach(n, c, Xoshiro256(seed))
        pa_max = int(pa.degrees_right().max())
        ua_max = uniform_attach_max_degree(n, c, Xoshiro256(10_000 + seed))
        if pa_max > ua_max:
            wins += 1
    assert wins >= 80


def test_ut_structure():
    tg = gen_stand_alone("ut", 3, Xoshiro256(0))
    assert [list(a) for a in tg.adj] == [[0], [0, 1], [0, 1, 2]]


def test_mh_structure():
    n = 100
    tg = gen_stand_alone("mh", n, Xoshiro256(0))
    extra = round(n / math.e)
    assert tg.left_count == n + extra
    assert tg.m == n + extra
    assert tg.right_count == n
    for i in range(n):
        assert list(tg.adj[i]) == [i]
    for t in range(n, n + extra):
        assert len(tg.adj[t]) == n


def test_fh_structure_n8():
    # left blocks X, Y, Z, I; right blocks U, V, W, K (cycles before cliques)
    tg = gen_stand_alone("fh", 8, Xoshiro256(0))
    # X block: u_i, v_i plus all of K
    assert list(tg.adj[0]) == [0, 2, 6, 7]
    assert list(tg.adj[1]) == [1, 3, 6, 7]
    # Y block: v_i, w_i
    assert list(tg.adj[2]) == [2, 4]
    assert list(tg.adj[3]) == [3, 5]
    # Z block: u_i, w_i
    assert list(tg.adj[4]) == [0, 4]
    assert list(tg.adj[5]) == [1, 5]
    # I block: complete to W
    assert list(tg.adj[6]) == [4, 5]
    assert list(tg.adj[7]) == [4, 5]
    # every 6-cycle is present: u_i-x_i-v_i-y_i-w_i-z_i-u_i
    for i in range(2):
        x, y, z = i, 2 + i, 4 + i
        u, v, w = i, 2 + i, 4 + i
        assert u in tg.adj[x] and v in tg.adj[x]
        assert v in tg.adj[y] and w in tg.adj[y]
        assert w in tg.adj[z] and u in tg.adj[z]


def test_fh_divisibility():
    with pytest.raises(ParamError, match="divisible by 4"):
        gen_stand_alone("fh", 10, Xoshiro256(0))


def test_group_graphs():
    tg = gen_stand_alone("fewg", 64, Xoshiro256(1))
    size = 64 // 32
    for t in range(64):
        assert len(tg.adj[t]) <= 10
    with pytest.raises(ParamError, match="divisible by 32"):
        gen_stand_alone("fewg", 63, Xoshiro256(1))
    with pytest.raises(ParamError, match="divisible by 256"):
        gen_stand_alone("manyg", 100, Xoshiro256(1))


def test_fewg_neighbors_within_adjacent_groups():
    n, k = 128, 32
    size = n // k
    tg = gen_stand_alone("fewg", n, Xoshiro256(2))
    # recover each type's group from the generator's permutation
    rng = Xoshiro256(2)
    perm = rng.permutation(n)
    group_of_slot = {}
    for g in range(k):
        for s in range(size):
            group_of_slot[int(perm[g * size + s])] = g
    for t in range(n):
        g = group_of_slot[t]
        allowed = {(g - 1) % k, g, (g + 1) % k}
        for r in tg.adj[t]:
            assert int(r) // size in allowed


def test_rope_structure():
    n, d = 36, 6
    tg = gen_stand_alone("rope", n, Xoshiro256(3))
    blocks = n // d
    for t in range(n):
        bt = t // d
        for r in tg.adj[t]:
            br = int(r) // d
            assert (br == bt + 1
                    or (bt == blocks - 1 and br == blocks - 1))
    # even-indexed pairs are perfect matchings: each L0 type has exactly
    # one neighbor and together they cover the R1 block
    first_block = [int(tg.adj[i][0]) for i in range(d)]
    assert all(len(tg.adj[i]) == 1 for i in range(d))
    assert sorted(first_block) == list(range(d, 2 * d))
    # offline block 0 is bare
    assert tg.degrees_right()[:d].sum() == 0
    with pytest.raises(ParamError, match="divisible by 6"):
        gen_stand_alone("rope", 40, Xoshiro256(3))


def test_hexa_structure_and_mean_degree():
    tg = gen_stand_alone("hexa", 1024, Xoshiro256(4))
    mean_deg = tg.edge_count() / 1024
    assert 5.0 < mean_deg <= 6.0  # dedup within blocks can only remove edges
    with pytest.raises(ParamError, match="perfect-square"):
        gen_stand_alone("hexa", 1000, Xoshiro256(4))


def test_zipf_denser_at_small_indices():
    tg = gen_stand_alone("zipf", 200, Xoshiro256(5))
    assert len(tg.adj[0]) > len(tg.adj[199])
    deg = tg.degrees_right()
    assert deg[0] > deg[199]


def test_convert_duplicating():
    g = GeneralGraph(2, [(0, 1)])
    tg = convert_duplicating(g)
    assert [list(a) for a in tg.adj] == [[1], [0]]
    triangle = GeneralGraph(3, [(0, 1), (0, 2), (1, 2)])
    tg = convert_duplicating(triangle)
    assert all(len(a) == 2 for a in tg.adj)
    assert tg.edge_count() == 6  # doubles the undirected edge count


def test_convert_partition_two_nodes():
    g = GeneralGraph(2, [(0, 1)])
    for seed in range(10):
        tg = convert_random_partition(g, Xoshiro256(seed))
        assert tg.edge_count() == 1


def test_convert_partition_k4():
    edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    for seed in range(10):
        tg = convert_random_partition(GeneralGraph(4, edges), Xoshiro256(seed))
        assert tg.edge_count() == 4


def test_convert_partition_keeps_half_on_average():
    rng = random.Random(9)
    n = 60
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < 0.2]
    g = GeneralGraph(n, edges)
    expect = (n // 2) * (n - n // 2) / (n * (n - 1) / 2)
    kept = [convert_random_partition(g, Xoshiro256(s)).edge_count() / len(edges)
            for s in range(100)]
    sigma = np.std(kept, ddof=1) / 10  # standard error over 100 seeds
    assert abs(np.mean(kept) - expect) < max(4 * sigma, 0.02)


def test_generate_rejects_missing_params():
    with pytest.raises(ParamError):
        generate(FamilySpec("erdos_renyi", 10))
    with pytest.raises(ParamError):
        generate(FamilySpec("molloy_reed", 10, tau=1.0))
    with pytest.raises(ParamError):
        generate(FamilySpec("left_regular", 10))
    with pytest.raises(ParamError):
        generate(FamilySpec("unknown_thing", 10))
