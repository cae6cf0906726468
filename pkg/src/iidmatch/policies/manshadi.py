"""Fractional-optimum estimation and correlated neighbor sampling.

The fractional optimum assigns each type-graph edge the probability that it
appears in an offline optimum of a random instance; it is estimated by
solving sampled instances exactly.  Each type's row, padded with a dummy
"stay unmatched" mass, tiles [0, 1) twice: once in descending-value order
and once cyclically shifted.  Drawing a single uniform and reading both
tilings yields two candidates whose overlap is minimal, which is the whole
point of the correlated (rather than independent) sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..baselines import DUMMY
from ..flow import max_matching
from ..graph import InstanceStream, Matching, TypeGraph, sample_instance
from ..rng import Xoshiro256


def _descending_greedy(inst: InstanceStream) -> Matching:
    """Greedy seed preferring the highest-index free neighbor.

    Used to warm-start the exact solves below.  Among the many maximum
    matchings of a sample, this seed steers the solver toward ones that
    spend high-index offline nodes first, which keeps the estimated
    fractional optimum off the low-index nodes that the online greedy
    fallbacks lean on; the deterministic solver bias is part of the
    estimator's contract.
    """
    tg = inst.graph
    taken = np.zeros(tg.right_count, dtype=bool)
    out = Matching(len(inst.arrivals), tg.right_count)
    for i, t in enumerate(inst.arrivals):
        nbrs = tg.adj[t]
        if not len(nbrs):
            continue
        free = nbrs[~taken[nbrs]]
        if len(free):
            r = int(free[-1])
            taken[r] = True
            out.add(i, r)
    return out


def estimate_fractional_optimal(tg: TypeGraph, samples: int,
                                rng: Xoshiro256) -> list[np.ndarray]:
    """Per-type edge rows (parallel to tg.adj) of estimated optimum frequencies.

    Each sampled instance is solved exactly, warm-started from a greedy
    matching; which optimum comes back therefore carries the deterministic
    solver's bias, which is accepted and documented.  Rows whose Monte-Carlo
    estimate exceeds 1 (possible because a type can contribute two matched
    arrivals to one sample) are rescaled to sum to 1, keeping the
    interval-partition precondition valid.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    counts = [np.zeros(len(a), dtype=np.int64) for a in tg.adj]
    positions = [dict((int(r), i) for i, r in enumerate(a)) for a in tg.adj]
    for _ in range(samples):
        inst = sample_instance(tg, rng.next_u64())
        adjacency = [tg.adj[t] for t in inst.arrivals]
        opt = max_matching(adjacency, tg.right_count,
                           warm_start=_descending_greedy(inst))
        for i, r in opt.pairs():
            t = int(inst.arrivals[i])
            counts[t][positions[t][r]] += 1
    rows = []
    for c in counts:
        row = c / samples
        total = row.sum()
        if total > 1.0:
            row = row / total
        rows.append(row)
    return rows


@dataclass
class IntervalPartitions:
    """Two tilings of [0, 1) for one type; owners include the dummy (-1)."""

    owners_i: np.ndarray  # candidate per interval, descending-value order
    bounds_i: np.ndarray  # right endpoints, increasing to 1.0
    owners_j: np.ndarray  # the cyclic shift used for the second sample
    bounds_j: np.ndarray


def build_interval_partitions(neighbors: np.ndarray,
                              f_row: np.ndarray) -> IntervalPartitions:
    """Tile [0,1) by descending f (dummy gets the leftover mass), plus the
    shifted tiling whose interval p carries the mass of neighbor p+1."""
    f_row = np.asarray(f_row, dtype=float)
    if np.any(f_row < 0):
        raise ValueError("negative fractional value")
    total = float(f_row.sum())
    if total > 1.0 + 1e-9:
        raise ValueError(f"row mass {total} exceeds 1")
    order = np.lexsort((neighbors, -f_row))
    owners = np.empty(len(f_row) + 1, dtype=np.int64)
    lengths = np.empty(len(f_row) + 1)
    owners[:-1] = np.asarray(neighbors, dtype=np.int64)[order]
    lengths[:-1] = f_row[order]
    owners[-1] = DUMMY
    lengths[-1] = max(0.0, 1.0 - total)
    owners_j = np.roll(owners, -1)
    lengths_j = np.roll(lengths, -1)
    bounds_i = np.cumsum(lengths)
    bounds_j = np.cumsum(lengths_j)
    bounds_i[-1] = bounds_j[-1] = 1.0
    return IntervalPartitions(owners, bounds_i, owners_j, bounds_j)


def correlated_sample(parts: IntervalPartitions, u: float) -> tuple[int, int]:
    """Owners of the two intervals containing ``u`` (first tiling, then shifted)."""
    if not 0.0 <= u < 1.0:
        raise ValueError("u outside [0, 1)")
    i = int(np.searchsorted(parts.bounds_i, u, side="right"))
    j = int(np.searchsorted(parts.bounds_j, u, side="right"))
    i = min(i, len(parts.owners_i) - 1)
    j = min(j, len(parts.owners_j) - 1)
    return int(parts.owners_i[i]), int(parts.owners_j[j])


def manshadi_suggest(parts: IntervalPartitions, rng: Xoshiro256) -> list[int]:
    """One uniform draw, two correlated candidates; a coinciding pair
    collapses to a single suggestion (trying the same node twice is a no-op)."""
    first, second = correlated_sample(parts, rng.random())
    if first == second:
        return [first]
    return [first, second]
