"""The five preprocessing-based policies for the known-i.i.d. model.

Each policy separates into a per-type-graph ``preprocess`` (pure function of
the graph plus an explicit generator) and a per-arrival ``suggest`` that
returns an ordered candidate list.  Suggestions depend only on the arriving
type, its arrival number, and fresh randomness, never on the matching built
so far; the execution wrapper in :mod:`iidmatch.baselines` turns them into
vanilla or greedy matchings.
"""

from __future__ import annotations

import numpy as np

from ..graph import TypeGraph
from ..rng import Xoshiro256
from .bluered import (BlueRed, TypeGraphFlow, bahmani_preprocess,
                      balance_left, balance_right, blue_red_decomposition,
                      feldman_flow, feldman_preprocess)
from .lists import (TypeListDistribution, brubach_distributions, brubach_lp,
                    brubach_lp_rows, jaillet_lu_fractional, jl_distributions)
from .manshadi import (IntervalPartitions, build_interval_partitions,
                       correlated_sample, estimate_fractional_optimal,
                       manshadi_suggest)
from .rounding import break_cycles, gandhi_round, second_modification

__all__ = [
    "BlueRed", "TypeGraphFlow", "bahmani_preprocess", "balance_left",
    "balance_right", "blue_red_decomposition", "feldman_flow",
    "feldman_preprocess", "TypeListDistribution", "brubach_distributions",
    "brubach_lp", "brubach_lp_rows", "jaillet_lu_fractional",
    "jl_distributions", "IntervalPartitions", "build_interval_partitions",
    "correlated_sample", "estimate_fractional_optimal", "manshadi_suggest",
    "break_cycles", "gandhi_round", "second_modification",
    "FeldmanPolicy", "BahmaniKapralovPolicy", "ManshadiPolicy",
    "JailletLuPolicy", "BrubachPolicy", "IID_POLICIES",
]


class _BlueRedPolicy:
    """First arrival of a type gets its blue node, the second its red one."""

    def suggest(self, state: BlueRed, type_index: int, arrival_no: int,
                rng: Xoshiro256) -> list[int]:
        if arrival_no == 1:
            r = int(state.blue[type_index])
        elif arrival_no == 2:
            r = int(state.red[type_index])
        else:
            return []
        return [] if r == -1 else [r]


class FeldmanPolicy(_BlueRedPolicy):
    name = "feldman"

    def preprocess(self, tg: TypeGraph, rng: Xoshiro256) -> BlueRed:
        return feldman_preprocess(tg)


class BahmaniKapralovPolicy(_BlueRedPolicy):
    name = "bahmani_kapralov"

    def preprocess(self, tg: TypeGraph, rng: Xoshiro256) -> BlueRed:
        return bahmani_preprocess(tg)


class ManshadiPolicy:
    name = "manshadi"

    def __init__(self, samples: int = 100):
        self.samples = samples

    def preprocess(self, tg: TypeGraph,
                   rng: Xoshiro256) -> list[IntervalPartitions]:
        rows = estimate_fractional_optimal(tg, self.samples, rng)
        return [build_interval_partitions(tg.adj[t], rows[t])
                for t in range(tg.left_count)]

    def suggest(self, state: list[IntervalPartitions], type_index: int,
                arrival_no: int, rng: Xoshiro256) -> list[int]:
        return manshadi_suggest(state[type_index], rng)


class _ListPolicy:
    def suggest(self, state: list[TypeListDistribution], type_index: int,
                arrival_no: int, rng: Xoshiro256) -> list[int]:
        return state[type_index].sample(rng)


class JailletLuPolicy(_ListPolicy):
    name = "jaillet_lu"

    def preprocess(self, tg: TypeGraph,
                   rng: Xoshiro256) -> list[TypeListDistribution]:
        return jl_distributions(tg, jaillet_lu_fractional(tg))


class BrubachPolicy(_ListPolicy):
    name = "brubach"

    def preprocess(self, tg: TypeGraph,
                   rng: Xoshiro256) -> list[TypeListDistribution]:
        fractional = brubach_lp(tg)  # may raise LpSizeError
        edge_left = np.fromiter(
            (t for t in range(tg.left_count) for _ in tg.adj[t]),
            dtype=np.int64, count=tg.edge_count())
        edge_right = (np.concatenate([a for a in tg.adj])
                      if tg.edge_count() else np.empty(0, dtype=np.int64))
        scaled = (np.concatenate(fractional)
                  if tg.edge_count() else np.empty(0)) * 3.0
        rounded = gandhi_round(edge_left, edge_right, scaled, rng)
        thirds = break_cycles(edge_left, edge_right, rounded)
        hprime = second_modification(edge_left, edge_right, thirds,
                                     tg.right_count)
        rows = []
        pos = 0
        for t in range(tg.left_count):
            deg = len(tg.adj[t])
            rows.append(hprime[pos:pos + deg])
            pos += deg
        return brubach_distributions(tg, rows)


IID_POLICIES = (FeldmanPolicy(), BahmaniKapralovPolicy(), ManshadiPolicy(),
                JailletLuPolicy(), BrubachPolicy())
