"""Integral max-flow, canonical min cut, and maximum bipartite matching.

General flow networks are solved by the Edmonds-Karp engine with pinned
tie-breaking (see :mod:`iidmatch.edmonds_karp`): the blue/red advice built
downstream depends on *which* maximum flow is found, and the hard
benchmark constructions are calibrated against the classic augmenting
order.  Maximum matchings, where only size and determinism matter, run on
scipy's Cython Dinic over the canonical unit-capacity network
(source -> left -> right -> sink), which is much faster on dense instances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .edmonds_karp import edmonds_karp_flow, resume_max_flow
from .graph import Matching


@dataclass
class FlowNetwork:
    """Directed network with non-negative integer capacities."""

    node_count: int
    source: int
    sink: int
    arcs: list[tuple[int, int, int]]  # (from, to, capacity)

    def __post_init__(self):
        if self.source == self.sink:
            raise ValueError("source equals sink")
        for u, v, cap in self.arcs:
            if cap < 0:
                raise ValueError(f"negative capacity on arc ({u}, {v})")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"arc ({u}, {v}) out of range")


@dataclass
class IntegralFlow:
    """Per-arc integral flow; ``values[i]`` belongs to ``net.arcs[i]``."""

    values: list[int]
    value: int


def solve_max_flow(net: FlowNetwork, force_python: bool = False) -> IntegralFlow:
    """Maximum integral s-t flow of ``net`` via Edmonds-Karp.

    Deterministic down to the per-arc flows: BFS scans residual arcs in
    insertion order and augments the first shortest path found.
    """
    if not net.arcs:
        return IntegralFlow([], 0)
    n = len(net.arcs)
    u = np.fromiter((a[0] for a in net.arcs), dtype=np.int64, count=n)
    v = np.fromiter((a[1] for a in net.arcs), dtype=np.int64, count=n)
    cap = np.fromiter((a[2] for a in net.arcs), dtype=np.int64, count=n)
    flows, value = edmonds_karp_flow(net.node_count, net.source, net.sink,
                                     u, v, cap, force_python=force_python)
    return IntegralFlow([int(f) for f in flows], value)


def min_cut_source_side(net: FlowNetwork, flow: IntegralFlow) -> frozenset[int]:
    """Nodes reachable from the source in the residual network of ``flow``.

    Rejects a non-maximum flow (one whose residual network still reaches the
    sink).
    """
    residual: list[list[int]] = [[] for _ in range(net.node_count)]
    for (u, v, cap), f in zip(net.arcs, flow.values):
        if f < cap:
            residual[u].append(v)
        if f > 0:
            residual[v].append(u)
    seen = np.zeros(net.node_count, dtype=bool)
    seen[net.source] = True
    queue = deque([net.source])
    while queue:
        x = queue.popleft()
        for y in residual[x]:
            if not seen[y]:
                seen[y] = True
                queue.append(y)
    if seen[net.sink]:
        raise ValueError("flow is not maximum: sink reachable in residual network")
    return frozenset(np.flatnonzero(seen).tolist())


def flow_conservation_violation(net: FlowNetwork, flow: IntegralFlow) -> str | None:
    """Audit helper: None if ``flow`` is feasible and conserving, else a reason."""
    balance = np.zeros(net.node_count, dtype=np.int64)
    for (u, v, cap), f in zip(net.arcs, flow.values):
        if not 0 <= f <= cap:
            return f"arc ({u}, {v}): flow {f} outside [0, {cap}]"
        balance[u] -= f
        balance[v] += f
    if -balance[net.source] != flow.value:
        return f"source outflow {-balance[net.source]} != value {flow.value}"
    for x in range(net.node_count):
        if x not in (net.source, net.sink) and balance[x] != 0:
            return f"node {x} unbalanced by {balance[x]}"
    return None


def validate_matching(adjacency: Sequence[np.ndarray], right_count: int,
                      matching: Matching) -> str | None:
    """None if ``matching`` is a valid matching of the left-adjacency graph."""
    if len(matching.match_of_online) != len(adjacency):
        return "matching left side has wrong length"
    if len(matching.match_of_right) != right_count:
        return "matching right side has wrong length"
    seen_right: set[int] = set()
    for i, r in enumerate(matching.match_of_online):
        r = int(r)
        if r == -1:
            continue
        if r in seen_right:
            return f"offline node {r} matched twice"
        seen_right.add(r)
        if r not in set(int(x) for x in adjacency[i]):
            return f"pair ({i}, {r}) is not an edge"
        if matching.match_of_right[r] != i:
            return f"lookup maps disagree on pair ({i}, {r})"
    return None


def _matching_network(adjacency: Sequence[np.ndarray], right_count: int,
                      degrees: np.ndarray):
    """Canonical unit-capacity network source -> left -> right -> sink."""
    rows = len(adjacency)
    indices = np.concatenate(
        [np.asarray(a, dtype=np.int64) for a in adjacency if len(a)])
    sink = 1 + rows + right_count
    arc_u = np.concatenate([
        np.zeros(rows, dtype=np.int64),
        1 + np.repeat(np.arange(rows, dtype=np.int64), degrees),
        1 + rows + np.arange(right_count, dtype=np.int64)])
    arc_v = np.concatenate([
        1 + np.arange(rows, dtype=np.int64),
        1 + rows + indices,
        np.full(right_count, sink, dtype=np.int64)])
    return arc_u, arc_v, sink


def max_matching(adjacency: Sequence[np.ndarray], right_count: int,
                 warm_start: Matching | None = None) -> Matching:
    """Maximum matching of the bipartite graph given as left adjacency lists.

    Solved as a maximum flow on the canonical unit-capacity network
    (source -> left -> right -> sink).  Without a warm start the engine is
    scipy's Dinic; a warm start is validated, loaded as the initial flow,
    and completed by the Edmonds-Karp engine, so which optimum comes back
    depends on the warm start (the size never does).
    """
    rows = len(adjacency)
    if warm_start is not None:
        problem = validate_matching(adjacency, right_count, warm_start)
        if problem is not None:
            raise ValueError(f"invalid warm start: {problem}")
    out = Matching(rows, right_count)
    if rows == 0 or right_count == 0:
        return out
    degrees = np.fromiter((len(a) for a in adjacency), dtype=np.int64,
                          count=rows)
    if degrees.sum() == 0:
        return out
    arc_u, arc_v, sink = _matching_network(adjacency, right_count, degrees)
    if warm_start is None:
        caps = np.ones(len(arc_u), dtype=np.int32)
        mat = csr_matrix((caps, (arc_u, arc_v)),
                         shape=(sink + 1, sink + 1))
        flow = maximum_flow(mat, 0, sink).flow
        # read the saturated left-to-right arcs out of the flow rows
        lo, hi = flow.indptr[1], flow.indptr[1 + rows]
        cols = flow.indices[lo:hi]
        data = flow.data[lo:hi]
        owner = np.repeat(np.arange(rows, dtype=np.int64),
                          np.diff(flow.indptr[1:rows + 2]))
        hit = (data == 1) & (cols >= 1 + rows)
        for i, c in zip(owner[hit], cols[hit]):
            out.add(int(i), int(c) - 1 - rows)
        return out
    # seed the Edmonds-Karp residual network with the warm start and finish
    initial = np.zeros(len(arc_u), dtype=np.int64)
    initial[:rows] = warm_start.match_of_online != -1
    offsets = np.zeros(rows + 1, dtype=np.int64)
    np.cumsum(degrees, out=offsets[1:])
    for i, r in warm_start.pairs():
        pos = offsets[i] + int(np.searchsorted(adjacency[i], r))
        initial[rows + pos] = 1
    matched_rights = warm_start.match_of_right != -1
    initial[rows + int(offsets[-1]):] = matched_rights
    flows, _ = resume_max_flow(sink + 1, 0, sink, arc_u, arc_v,
                               np.ones(len(arc_u), dtype=np.int64), initial)
    middle = flows[rows:rows + int(offsets[-1])]
    for i in range(rows):
        seg = middle[offsets[i]:offsets[i + 1]]
        hits = np.flatnonzero(seg)
        if len(hits):
            out.add(i, int(adjacency[i][hits[0]]))
    return out
