"""Deterministic experiment runner and CSV emission.

One experiment evaluates a roster of algorithms over graph points.  Family
points regenerate a fresh type graph per trial; fixed points (deterministic
constructions and ingested files) sample fresh instances of one graph.  All
algorithms share each trial's instance, and every source of randomness is a
named stream derived from (master seed, point, trial, stream, algorithm
slot), so results never depend on which other algorithms run, on trial
completion order, or on the worker count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from multiprocessing import get_context
from typing import IO

import numpy as np

from .baselines import (category_advice, execute_policy, ranking,
                        simple_greedy, three_pass)
from .flow import max_matching
from .generators import DETERMINISTIC, FamilySpec, generate
from .graph import Permutation, TypeGraph, sample_instance
from .lp import LpSizeError
from .policies import IID_POLICIES
from .rng import Xoshiro256, derive_seed

BASELINES = ("simple_greedy", "ranking", "category_advice", "three_pass")
POLICY_NAMES = tuple(p.name for p in IID_POLICIES)
ALGORITHM_NAMES = BASELINES + POLICY_NAMES
_SLOT = {name: i for i, name in enumerate(ALGORITHM_NAMES)}
_POLICY = {p.name: p for p in IID_POLICIES}

_STREAM_GRAPH, _STREAM_INSTANCE, _STREAM_PREP, _STREAM_ONLINE = range(4)

CSV_HEADER = ("family,params,graph_id,algorithm,variant,trials,mean_alg,"
              "mean_opt,ratio,ratio_stddev,preprocess_ms,online_ms")


def default_roster() -> list[tuple[str, str]]:
    """Every algorithm/variant pair: 4 baselines plus 5 policies x 2 modes."""
    roster: list[tuple[str, str]] = [(n, "-") for n in BASELINES]
    for name in POLICY_NAMES:
        roster.append((name, "vanilla"))
        roster.append((name, "greedy"))
    return roster


def expand_roster(names: list[str], variants: list[str]) -> list[tuple[str, str]]:
    roster = []
    for name in names:
        if name in BASELINES:
            roster.append((name, "-"))
        elif name in POLICY_NAMES:
            for v in variants:
                roster.append((name, v))
        else:
            raise ValueError(f"unknown algorithm {name!r}")
    return roster


@dataclass(frozen=True)
class GraphPoint:
    """One graph setting: a family spec to generate, or a fixed graph."""

    family: str
    params: dict
    spec: FamilySpec | None = None
    fixed_graph: TypeGraph | None = None
    regenerate: bool = False

    @staticmethod
    def from_family(family: str, n: int, **params) -> "GraphPoint":
        spec = FamilySpec(family=family, n=n, **params)
        shown = spec.params()
        return GraphPoint(family=family, params=shown, spec=spec,
                          regenerate=family not in DETERMINISTIC)

    @staticmethod
    def from_graph(tg: TypeGraph, label: str) -> "GraphPoint":
        return GraphPoint(family="file", params={"file": label},
                          fixed_graph=tg, regenerate=False)


@dataclass
class ExperimentConfig:
    points: list[GraphPoint]
    algorithms: list[tuple[str, str]]
    trials: int = 100
    master_seed: int = 0
    timings: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")


@dataclass
class AggregateRecord:
    family: str
    params: str
    graph_id: str
    algorithm: str
    variant: str
    trials: int
    mean_alg: float | None
    mean_opt: float
    ratio: float | None
    ratio_stddev: float | None
    preprocess_ms: float | None
    online_ms: float | None
    skipped: bool = False


def timing_split(record: AggregateRecord) -> tuple[float, float]:
    """(preprocess ms, online ms) of a record produced with timing enabled."""
    if record.preprocess_ms is None or record.online_ms is None:
        raise ValueError("record was produced without timing enabled")
    return record.preprocess_ms, record.online_ms


def _format_param(v) -> str:
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


def serialize_params(params: dict) -> str:
    return ";".join(f"{k}={_format_param(v)}" for k, v in params.items())


def _prepare_policies(tg: TypeGraph, names: set[str], master_seed: int,
                      point_ix: int, trial_ix: int,
                      timings: bool) -> tuple[dict, dict, set[str]]:
    """Preprocess each requested policy once for this graph."""
    states: dict[str, object] = {}
    prep_ms: dict[str, float] = {}
    skipped: set[str] = set()
    for name in POLICY_NAMES:
        if name not in names:
            continue
        rng = Xoshiro256(derive_seed(master_seed, point_ix, trial_ix,
                                     _STREAM_PREP, _SLOT[name]))
        start = time.perf_counter()
        try:
            states[name] = _POLICY[name].preprocess(tg, rng)
        except LpSizeError:
            skipped.add(name)
            continue
        if timings:
            prep_ms[name] = (time.perf_counter() - start) * 1e3
    return states, prep_ms, skipped


def _run_algorithm(inst, name: str, variant: str, state,
                   rng: Xoshiro256) -> int:
    if name == "simple_greedy":
        return simple_greedy(inst).size
    if name == "ranking":
        return ranking(inst, rng).size
    if name == "category_advice":
        sigma = Permutation.identity(inst.graph.right_count)
        return category_advice(inst, sigma).size
    if name == "three_pass":
        sigma = Permutation.identity(inst.graph.right_count)
        return three_pass(inst, sigma).size
    return execute_policy(inst, _POLICY[name], state, variant, rng).size


def run_trial(tg: TypeGraph, states: dict, skipped: set[str],
              algorithms: list[tuple[str, str]], master_seed: int,
              point_ix: int, trial_ix: int,
              timings: bool) -> tuple[dict, int, dict]:
    """One instance shared by all algorithms; returns (sizes, opt, online_ms)."""
    inst = sample_instance(tg, derive_seed(master_seed, point_ix, trial_ix,
                                           _STREAM_INSTANCE, 0))
    start = time.perf_counter()
    adjacency = [tg.adj[t] for t in inst.arrivals]
    opt_size = max_matching(adjacency, tg.right_count).size
    opt_ms = (time.perf_counter() - start) * 1e3
    sizes: dict[tuple[str, str], int | None] = {}
    online_ms: dict[tuple[str, str], float] = {("opt", "-"): opt_ms}
    for name, variant in algorithms:
        if name in skipped:
            sizes[(name, variant)] = None
            continue
        rng = Xoshiro256(derive_seed(master_seed, point_ix, trial_ix,
                                     _STREAM_ONLINE, _SLOT[name]))
        start = time.perf_counter()
        sizes[(name, variant)] = _run_algorithm(
            inst, name, variant, states.get(name), rng)
        online_ms[(name, variant)] = (time.perf_counter() - start) * 1e3
    return sizes, opt_size, online_ms


_WORK: dict = {}


def _fixed_trial(trial_ix: int):
    w = _WORK
    return run_trial(w["tg"], w["states"], w["skipped"], w["algorithms"],
                     w["master_seed"], w["point_ix"], trial_ix, w["timings"])


def _regen_trial(trial_ix: int):
    w = _WORK
    seed = derive_seed(w["master_seed"], w["point_ix"], trial_ix,
                       _STREAM_GRAPH, 0)
    tg = generate(replace(w["spec"], seed=seed))
    names = set(n for n, _ in w["algorithms"])
    states, prep_ms, skipped = _prepare_policies(
        tg, names, w["master_seed"], w["point_ix"], trial_ix, w["timings"])
    sizes, opt, online = run_trial(tg, states, skipped, w["algorithms"],
                                   w["master_seed"], w["point_ix"], trial_ix,
                                   w["timings"])
    return sizes, opt, online, prep_ms, skipped


def _warm_flow_engine() -> None:
    # compile the jitted flow kernel before forking so workers inherit it
    from .policies.bluered import feldman_flow
    feldman_flow(TypeGraph.from_lists([[0]], right_count=1))


def _map_trials(worker, trials: int, jobs: int) -> list:
    if jobs <= 1:
        return [worker(t) for t in range(trials)]
    _warm_flow_engine()
    with get_context("fork").Pool(jobs) as pool:
        return pool.map(worker, range(trials))


def _aggregate(point: GraphPoint, point_ix: int, cfg: ExperimentConfig,
               all_sizes: list[dict], all_opt: list[int],
               all_online: list[dict], prep_ms: dict,
               prep_counts: dict) -> list[AggregateRecord]:
    params = serialize_params(point.params)
    graph_id = f"g{point_ix:03d}"
    trials = cfg.trials
    opt_arr = np.array(all_opt, dtype=np.int64)
    mean_opt = float(opt_arr.mean())
    records = []
    for name, variant in cfg.algorithms:
        sizes = [s[(name, variant)] for s in all_sizes]
        prep = None
        if cfg.timings and name in POLICY_NAMES:
            # vanilla and greedy variants share one preprocessing pass
            if prep_counts.get(name):
                prep = prep_ms.get(name, 0.0) / prep_counts[name]
        elif cfg.timings:
            prep = 0.0
        if any(s is None for s in sizes):
            records.append(AggregateRecord(
                point.family, params, graph_id, name, variant, trials,
                None, mean_opt, None, None, prep, None, skipped=True))
            continue
        arr = np.array(sizes, dtype=np.int64)
        per_trial = np.where(opt_arr > 0, arr / np.maximum(opt_arr, 1), 1.0)
        total_opt = int(opt_arr.sum())
        ratio = float(arr.sum() / total_opt) if total_opt else 1.0
        stddev = float(per_trial.std(ddof=1)) if trials > 1 else 0.0
        online = None
        if cfg.timings:
            online = float(np.mean([o[(name, variant)] for o in all_online]))
        records.append(AggregateRecord(
            point.family, params, graph_id, name, variant, trials,
            float(arr.mean()), mean_opt, ratio, stddev, prep, online))
    opt_online = None
    if cfg.timings:
        opt_online = float(np.mean([o[("opt", "-")] for o in all_online]))
    records.append(AggregateRecord(
        point.family, params, graph_id, "opt", "-", trials,
        mean_opt, mean_opt, 1.0, 0.0, 0.0 if cfg.timings else None,
        opt_online))
    return records


def _run_point(cfg: ExperimentConfig, point_ix: int,
               point: GraphPoint) -> list[AggregateRecord]:
    names = set(n for n, _ in cfg.algorithms)
    prep_ms: dict[str, float] = {}
    prep_counts: dict[str, int] = {}
    _WORK.clear()
    _WORK.update(algorithms=cfg.algorithms, master_seed=cfg.master_seed,
                 point_ix=point_ix, timings=cfg.timings)
    if point.regenerate:
        _WORK["spec"] = point.spec
        results = _map_trials(_regen_trial, cfg.trials, cfg.jobs)
        all_sizes = [r[0] for r in results]
        all_opt = [r[1] for r in results]
        all_online = [r[2] for r in results]
        for r in results:
            for k, v in r[3].items():
                prep_ms[k] = prep_ms.get(k, 0.0) + v
                prep_counts[k] = prep_counts.get(k, 0) + 1
    else:
        if point.fixed_graph is not None:
            tg = point.fixed_graph
        else:
            seed = derive_seed(cfg.master_seed, point_ix, 0, _STREAM_GRAPH, 0)
            tg = generate(replace(point.spec, seed=seed))
        states, prep, skipped = _prepare_policies(
            tg, names, cfg.master_seed, point_ix, 0, cfg.timings)
        prep_ms.update(prep)
        prep_counts.update({k: 1 for k in prep})
        _WORK.update(tg=tg, states=states, skipped=skipped)
        results = _map_trials(_fixed_trial, cfg.trials, cfg.jobs)
        all_sizes = [r[0] for r in results]
        all_opt = [r[1] for r in results]
        all_online = [r[2] for r in results]
    return _aggregate(point, point_ix, cfg, all_sizes, all_opt, all_online,
                      prep_ms, prep_counts)


def run_experiment(cfg: ExperimentConfig) -> list[AggregateRecord]:
    records: list[AggregateRecord] = []
    for point_ix, point in enumerate(cfg.points):
        records.extend(_run_point(cfg, point_ix, point))
    return records


def _fmt(value: float | None, spec: str) -> str:
    return "" if value is None else format(value, spec)


def write_csv(records: list[AggregateRecord], fh: IO[str]) -> None:
    fh.write(CSV_HEADER + "\n")
    for r in records:
        fh.write(",".join([
            r.family, r.params, r.graph_id, r.algorithm, r.variant,
            str(r.trials), _fmt(r.mean_alg, ".6f"), _fmt(r.mean_opt, ".6f"),
            _fmt(r.ratio, ".6f"), _fmt(r.ratio_stddev, ".6f"),
            _fmt(r.preprocess_ms, ".3f"), _fmt(r.online_ms, ".3f"),
        ]) + "\n")
