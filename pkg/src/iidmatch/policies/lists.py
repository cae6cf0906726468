"""Random-list policies: per-type distributions over ordered candidate lists.

The flow-LP policy solves a matching LP whose optimum is third-integral (it
is computed exactly as a max flow with capacities scaled by 3) and turns
each type's at-most-three positive neighbors, plus a dummy for the leftover
mass, into a distribution over orderings.  The LP-rounding policy solves a
tighter LP with pairwise constraints per offline node, rounds it, repairs
the result, and weights orderings by the displayed proportional rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from ..baselines import DUMMY
from ..graph import TypeGraph
from ..lp import LinearProgram, LpSizeError, guard_row_count, solve_lp_max
from ..rng import Xoshiro256
from .bluered import build_feldman_network
from ..flow import solve_max_flow

BRUBACH_EDGE_CAP = 1.0 - 1.0 / np.e
BRUBACH_PAIR_CAP = 1.0 - 1.0 / np.e ** 2


@dataclass
class TypeListDistribution:
    """Distribution over ordered candidate tuples for one type."""

    lists: list[tuple[int, ...]]
    cumprob: np.ndarray

    def sample(self, rng: Xoshiro256) -> list[int]:
        i = int(np.searchsorted(self.cumprob, rng.random(), side="right"))
        return list(self.lists[min(i, len(self.lists) - 1)])


def _distribution(weighted: list[tuple[tuple[int, ...], float]]) -> TypeListDistribution:
    total = sum(w for _, w in weighted)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"list probabilities sum to {total}")
    cum = np.cumsum([w for _, w in weighted])
    cum[-1] = 1.0
    return TypeListDistribution([l for l, _ in weighted], cum)


def jaillet_lu_fractional(tg: TypeGraph) -> list[np.ndarray]:
    """Optimal thirds (0, 1, or 2 per edge) of the degree-capped matching LP.

    Solved exactly as an integral max flow on the network with capacities
    (3, 2, 3); rows and columns sum to at most 3 thirds.
    """
    net, first = build_feldman_network(tg, graph_arc_cap=2, side_cap=3)
    flow = solve_max_flow(net)
    rows = []
    pos = first
    for t in range(tg.left_count):
        deg = len(tg.adj[t])
        rows.append(np.array(flow.values[pos:pos + deg], dtype=np.int64))
        pos += deg
    return rows


def jl_distributions(tg: TypeGraph,
                     thirds: list[np.ndarray]) -> list[TypeListDistribution]:
    """One or two candidates are ordered by their own mass; three candidates
    (dummy included) get all six orderings uniformly."""
    out = []
    for t in range(tg.left_count):
        cands = [(int(r), int(w))
                 for r, w in zip(tg.adj[t], thirds[t]) if w > 0]
        slack = 3 - sum(w for _, w in cands)
        if slack > 0:
            cands.append((DUMMY, slack))
        if len(cands) > 3:
            raise ValueError(f"type {t} has {len(cands)} restricted neighbors")
        if not cands:
            out.append(_distribution([((), 1.0)]))
        elif len(cands) == 1:
            out.append(_distribution([((cands[0][0],), 1.0)]))
        elif len(cands) == 2:
            (r1, w1), (r2, w2) = cands
            out.append(_distribution([((r1, r2), w1 / 3.0),
                                      ((r2, r1), w2 / 3.0)]))
        else:
            ids = [c[0] for c in cands]
            out.append(_distribution([(p, 1.0 / 6.0)
                                      for p in permutations(ids)]))
    return out


def brubach_lp_rows(tg: TypeGraph) -> int:
    """Constraint-row count of the pairwise LP (used by the size guard)."""
    deg = tg.degrees_right()
    return int(tg.left_count + tg.right_count + (deg * (deg - 1) // 2).sum())


def brubach_lp(tg: TypeGraph) -> list[np.ndarray]:
    """Optimal solution of the matching LP with per-edge cap 1 - 1/e and
    pairwise per-offline-node caps 1 - 1/e^2, as per-type rows."""
    guard_row_count(brubach_lp_rows(tg))
    n_edges = tg.edge_count()
    rows: list[tuple[np.ndarray, np.ndarray, float]] = []
    by_right: dict[int, list[int]] = {}
    # per-type rows; edge variables are numbered in tg.adj iteration order
    pos = 0
    for t in range(tg.left_count):
        deg = len(tg.adj[t])
        if deg:
            idx = np.arange(pos, pos + deg, dtype=np.int64)
            rows.append((idx, np.ones(deg), 1.0))
        for r in tg.adj[t]:
            by_right.setdefault(int(r), []).append(pos)
            pos += 1
    # per-offline rows and pairwise rows
    for r in sorted(by_right):
        ids = by_right[r]
        rows.append((np.array(ids, dtype=np.int64), np.ones(len(ids)), 1.0))
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                rows.append((np.array([ids[i], ids[j]], dtype=np.int64),
                             np.ones(2), BRUBACH_PAIR_CAP))
    lp = LinearProgram(
        var_count=n_edges,
        objective=np.ones(n_edges),
        rows=rows,
        lower=np.zeros(n_edges),
        upper=np.full(n_edges, BRUBACH_EDGE_CAP),
    )
    sol = solve_lp_max(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"pairwise LP unexpectedly {sol.status}")
    out = []
    pos = 0
    for t in range(tg.left_count):
        deg = len(tg.adj[t])
        out.append(sol.values[pos:pos + deg].copy())
        pos += deg
    return out


def brubach_distributions(tg: TypeGraph,
                          hprime: list[np.ndarray]) -> list[TypeListDistribution]:
    """Orderings weighted by the proportional rule: two candidates by their
    leading mass, three candidates by h_i * h_j / (h_j + h_k)."""
    out = []
    for t in range(tg.left_count):
        cands = [(int(r), float(w))
                 for r, w in zip(tg.adj[t], hprime[t]) if w > 1e-12]
        if len(cands) > 3:
            raise ValueError(f"type {t} has {len(cands)} positive candidates")
        if not cands:
            out.append(_distribution([((), 1.0)]))
        elif len(cands) == 1:
            out.append(_distribution([((cands[0][0],), 1.0)]))
        elif len(cands) == 2:
            (r1, w1), (r2, w2) = cands
            out.append(_distribution([((r1, r2), w1 / (w1 + w2)),
                                      ((r2, r1), w2 / (w1 + w2))]))
        else:
            weighted = []
            for (ri, wi), (rj, wj), (rk, wk) in permutations(cands):
                weighted.append(((ri, rj, rk), wi * wj / (wj + wk)))
            total = sum(w for _, w in weighted)
            out.append(_distribution([(l, w / total) for l, w in weighted]))
    return out
