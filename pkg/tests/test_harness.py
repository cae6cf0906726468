import io

import numpy as np
import pytest

import iidmatch.lp as lp_module
from iidmatch.harness import (ALGORITHM_NAMES, AggregateRecord,
                              ExperimentConfig, GraphPoint, default_roster,
                              expand_roster, run_experiment, serialize_params,
                              timing_split, write_csv)


def run(points, algorithms, trials=4, seed=11, jobs=1, timings=False):
    cfg = ExperimentConfig(points=points, algorithms=algorithms,
                           trials=trials, master_seed=seed, jobs=jobs,
                           timings=timings)
    return run_experiment(cfg)


def test_complete_graph_greedy_is_optimal():
    point = GraphPoint.from_family("left_regular", 12, d=12)
    recs = run([point], [("simple_greedy", "-")])
    by_algo = {r.algorithm: r for r in recs}
    assert by_algo["simple_greedy"].ratio == pytest.approx(1.0)
    assert by_algo["opt"].ratio == 1.0
    assert by_algo["opt"].mean_alg == by_algo["simple_greedy"].mean_opt


def test_full_roster_row_count():
    point = GraphPoint.from_family("rope", 24)
    recs = run([point], default_roster(), trials=2)
    assert len(recs) == 15  # 4 baselines + 5 policies x 2 variants + opt
    assert recs[-1].algorithm == "opt"


def test_determinism_same_seed():
    point = GraphPoint.from_family("erdos_renyi", 20, c=2.0)
    a = run([point], default_roster(), trials=3, seed=5)
    b = run([point], default_roster(), trials=3, seed=5)
    assert a == b
    c = run([point], default_roster(), trials=3, seed=6)
    assert any(x != y for x, y in zip(a, c))


def test_jobs_do_not_change_results():
    point = GraphPoint.from_family("erdos_renyi", 20, c=2.0)
    a = run([point], default_roster(), trials=4, seed=5, jobs=1)
    b = run([point], default_roster(), trials=4, seed=5, jobs=3)
    assert a == b


def test_adding_algorithms_does_not_perturb_existing():
    point = GraphPoint.from_family("erdos_renyi", 20, c=2.0)
    small = run([point], [("ranking", "-")], trials=3, seed=5)
    big = run([point], default_roster(), trials=3, seed=5)
    small_rank = [r for r in small if r.algorithm == "ranking"][0]
    big_rank = [r for r in big if r.algorithm == "ranking"][0]
    assert small_rank == big_rank


def test_alg_never_beats_opt_and_greedy_dominates_vanilla():
    point = GraphPoint.from_family("erdos_renyi", 25, c=3.0)
    recs = run([point], default_roster(), trials=5)
    by_key = {(r.algorithm, r.variant): r for r in recs}
    for r in recs:
        if r.mean_alg is not None:
            assert r.mean_alg <= r.mean_opt + 1e-12
            assert r.ratio <= 1.0 + 1e-12
    for name in ("feldman", "bahmani_kapralov", "manshadi", "jaillet_lu",
                 "brubach"):
        assert (by_key[(name, "greedy")].ratio
                >= by_key[(name, "vanilla")].ratio - 1e-12)


def test_single_trial_zero_stddev():
    point = GraphPoint.from_family("ut", 10)
    recs = run([point], [("simple_greedy", "-")], trials=1)
    assert all(r.ratio_stddev == 0.0 for r in recs)


def test_fixed_graph_point():
    from iidmatch.graph import TypeGraph
    tg = TypeGraph.from_lists([[0], [0, 1]], right_count=2)
    point = GraphPoint.from_graph(tg, "toy.tg")
    recs = run([point], [("simple_greedy", "-")], trials=3)
    assert recs[0].family == "file"
    assert recs[0].params == "file=toy.tg"


def test_lp_guard_produces_skipped_row(monkeypatch):
    monkeypatch.setattr(lp_module, "MAX_LP_ROWS", 1)
    point = GraphPoint.from_family("rope", 12)
    recs = run([point], [("brubach", "vanilla"), ("simple_greedy", "-")],
               trials=2)
    by_algo = {r.algorithm: r for r in recs}
    assert by_algo["brubach"].skipped
    assert by_algo["brubach"].ratio is None
    assert not by_algo["simple_greedy"].skipped


def test_timings_populated_when_enabled():
    point = GraphPoint.from_family("rope", 12)
    recs = run([point], [("feldman", "vanilla"), ("simple_greedy", "-")],
               trials=2, timings=True)
    by_algo = {r.algorithm: r for r in recs}
    assert by_algo["feldman"].preprocess_ms > 0
    assert by_algo["simple_greedy"].preprocess_ms == 0.0
    assert by_algo["simple_greedy"].online_ms > 0
    # disabled by default
    recs = run([point], [("simple_greedy", "-")], trials=2)
    assert all(r.preprocess_ms is None and r.online_ms is None for r in recs)


def test_timing_split_accessor():
    point = GraphPoint.from_family("rope", 12)
    recs = run([point], [("feldman", "vanilla")], trials=2, timings=True)
    pre, online = timing_split(recs[0])
    assert pre > 0 and online > 0
    plain = run([point], [("feldman", "vanilla")], trials=2)
    with pytest.raises(ValueError, match="without timing"):
        timing_split(plain[0])


def test_heavier_preprocessing_costs_more():
    # the pairwise-LP policy pays far more preprocessing than the plain
    # flow-decomposition policy on a moderately dense regular graph
    point = GraphPoint.from_family("left_regular", 120, d=10)
    recs = run([point], [("feldman", "vanilla"), ("brubach", "vanilla")],
               trials=2, timings=True)
    by_algo = {r.algorithm: r for r in recs}
    assert (timing_split(by_algo["brubach"])[0]
            > timing_split(by_algo["feldman"])[0])


def test_csv_format():
    point = GraphPoint.from_family("ut", 8)
    recs = run([point], [("simple_greedy", "-")], trials=2)
    buf = io.StringIO()
    write_csv(recs, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ("family,params,graph_id,algorithm,variant,trials,"
                        "mean_alg,mean_opt,ratio,ratio_stddev,"
                        "preprocess_ms,online_ms")
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert cells[0] == "ut"
    assert cells[1] == "n=8"
    assert cells[2] == "g000"
    assert cells[-1] == "" and cells[-2] == ""  # timings disabled


def test_serialize_params():
    assert serialize_params({"n": 10, "c": 4.9}) == "n=10;c=4.9"
    assert serialize_params({"n": 10, "c": 0.30000000000000004}) == "n=10;c=0.3"


def test_expand_roster_and_validation():
    roster = expand_roster(["simple_greedy", "feldman"], ["greedy"])
    assert roster == [("simple_greedy", "-"), ("feldman", "greedy")]
    with pytest.raises(ValueError):
        expand_roster(["nope"], ["vanilla"])
    with pytest.raises(ValueError):
        ExperimentConfig(points=[], algorithms=[], trials=1)


def test_config_rejects_zero_trials():
    with pytest.raises(ValueError):
        ExperimentConfig(points=[], algorithms=[("simple_greedy", "-")],
                         trials=0)
