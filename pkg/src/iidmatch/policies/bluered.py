"""Blue/red decompositions and the flow-based preprocessing they consume.

A maximum flow on the capacitated network (source -> offline nodes at 2,
graph arcs offline -> type at 1, types -> sink at 2) induces a subgraph of
maximum degree 2, i.e. disjoint paths and cycles.  That subgraph decomposes
into a blue "semi-matching" (at most one blue edge per type, up to two per
offline node) and a red matching; the online stage offers the blue node to a
type's first arrival and the red node to its second.

The balanced variant recomputes parts of the flow so that as many nodes as
possible carry exactly one unit, via auxiliary unit-capacity networks built
from the canonical min cut.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..flow import FlowNetwork, IntegralFlow, min_cut_source_side, solve_max_flow
from ..graph import TypeGraph


@dataclass
class BlueRed:
    """Per-type blue/red offline suggestions; -1 where undefined."""

    blue: np.ndarray
    red: np.ndarray


@dataclass
class TypeGraphFlow:
    """An integral flow restricted to the type-graph edges."""

    edges: list[tuple[int, int]]  # (type, offline)
    flow: np.ndarray  # int, parallel to edges

    def left_through(self, left_count: int) -> np.ndarray:
        out = np.zeros(left_count, dtype=np.int64)
        for (t, _), f in zip(self.edges, self.flow):
            out[t] += f
        return out

    def right_through(self, right_count: int) -> np.ndarray:
        out = np.zeros(right_count, dtype=np.int64)
        for (_, r), f in zip(self.edges, self.flow):
            out[r] += f
        return out


def blue_red_decomposition(left_count: int, right_count: int,
                           edges: list[tuple[int, int]]) -> BlueRed:
    """Color a max-degree-2 bipartite subgraph into blue and red edge sets.

    Cycles alternate blue/red.  Odd paths alternate starting with blue (one
    more blue than red).  Even paths with both ends offline alternate
    starting with blue; even paths with both ends on the type side start
    with two blue edges, then alternate red/blue, so that every type on the
    path still receives a blue edge.  Walks start from the smallest node
    (types before offline nodes) toward its smallest neighbor, which pins
    down the coloring deterministically.
    """
    # node ids: types are 2t, offline nodes 2r+1
    adj: dict[int, list[int]] = {}
    for t, r in edges:
        a, b = 2 * t, 2 * r + 1
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for node, ns in adj.items():
        if len(ns) > 2:
            raise ValueError(f"node {node // 2} on side "
                             f"{'L' if node % 2 == 0 else 'R'} has degree {len(ns)}")
        ns.sort()

    blue = np.full(left_count, -1, dtype=np.int32)
    red = np.full(left_count, -1, dtype=np.int32)
    red_right_used = np.zeros(right_count, dtype=bool)

    def paint(u: int, v: int, color: str) -> None:
        t, r = (u // 2, v // 2) if u % 2 == 0 else (v // 2, u // 2)
        if color == "blue":
            if blue[t] != -1:
                raise AssertionError(f"type {t} received two blue edges")
            blue[t] = r
        else:
            if red[t] != -1 or red_right_used[r]:
                raise AssertionError("red edges do not form a matching")
            red[t] = r
            red_right_used[r] = True

    visited: set[int] = set()
    for start in sorted(adj):
        if start in visited or len(adj[start]) == 2:
            continue  # path endpoints first; cycles handled below
        # walk the path from this endpoint
        path = [start]
        prev, cur = -1, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
        visited.update(path)  # sorted scan: paths are painted from their
        # smaller endpoint, the larger one is skipped as visited
        k = len(path) - 1  # number of edges
        if k % 2 == 1 or start % 2 == 1:  # odd path, or even path ending offline
            colors = ["blue" if i % 2 == 0 else "red" for i in range(k)]
        else:  # even path with both endpoints on the type side
            colors = ["blue", "blue"] + ["red" if i % 2 == 0 else "blue"
                                         for i in range(k - 2)]
        for i in range(k):
            paint(path[i], path[i + 1], colors[i])

    for start in sorted(adj):
        if start in visited:
            continue
        cycle = [start]
        prev, cur = start, adj[start][0]
        while cur != start:
            cycle.append(cur)
            nxt = [x for x in adj[cur] if x != prev]
            prev, cur = cur, nxt[0]
        visited.update(cycle)
        n = len(cycle)
        for i in range(n):
            paint(cycle[i], cycle[(i + 1) % n], "blue" if i % 2 == 0 else "red")

    return BlueRed(blue, red)


def build_feldman_network(tg: TypeGraph, graph_arc_cap: int = 1,
                          side_cap: int = 2) -> tuple[FlowNetwork, int]:
    """Network with source -> offline (side_cap), offline -> type
    (graph_arc_cap), type -> sink (side_cap).  Returns (network, index of the
    first graph arc); graph arcs follow tg.adj iteration order."""
    source = 0
    right0 = 1
    left0 = 1 + tg.right_count
    sink = left0 + tg.left_count
    arcs: list[tuple[int, int, int]] = []
    for r in range(tg.right_count):
        arcs.append((source, right0 + r, side_cap))
    for t in range(tg.left_count):
        arcs.append((left0 + t, sink, side_cap))
    first_graph_arc = len(arcs)
    for t in range(tg.left_count):
        for r in tg.adj[t]:
            arcs.append((right0 + int(r), left0 + t, graph_arc_cap))
    return FlowNetwork(sink + 1, source, sink, arcs), first_graph_arc


def feldman_flow(tg: TypeGraph) -> tuple[FlowNetwork, IntegralFlow, TypeGraphFlow]:
    net, first = build_feldman_network(tg)
    flow = solve_max_flow(net)
    edges = [(t, int(r)) for t in range(tg.left_count) for r in tg.adj[t]]
    values = np.array(flow.values[first:], dtype=np.int64)
    return net, flow, TypeGraphFlow(edges, values)


def feldman_preprocess(tg: TypeGraph) -> BlueRed:
    _, _, tgf = feldman_flow(tg)
    support = [e for e, f in zip(tgf.edges, tgf.flow) if f > 0]
    return blue_red_decomposition(tg.left_count, tg.right_count, support)


def _balance(tg: TypeGraph, a_mask: np.ndarray, b_mask: np.ndarray,
             tgf: TypeGraphFlow, balance_left_side: bool) -> tuple[np.ndarray, int]:
    """Shared body of the two balancing procedures.

    Returns (delta per graph edge in {-1, 0, +1}, augmentation value).  A
    -1 cancels one unit of existing flow on the edge; +1 adds one.
    """
    left_through = tgf.left_through(len(a_mask))
    right_through = tgf.right_through(len(b_mask))
    # auxiliary node ids: types 2t, offline 2r+1, then source and sink
    node_ids: dict[int, int] = {}

    def nid(key: int) -> int:
        if key not in node_ids:
            node_ids[key] = len(node_ids)
        return node_ids[key]

    middle: list[tuple[int, int]] = []  # (arc index, edge index)
    arcs: list[tuple[int, int, int]] = []
    src_key, sink_key = -2, -4
    source, sink = nid(src_key), nid(sink_key)
    if balance_left_side:
        for t in np.flatnonzero(a_mask):
            if left_through[t] == 2:
                arcs.append((source, nid(2 * int(t)), 1))
            elif left_through[t] == 0:
                arcs.append((nid(2 * int(t)), sink, 1))
    else:
        for r in np.flatnonzero(b_mask):
            if right_through[r] == 0:
                arcs.append((source, nid(2 * int(r) + 1), 1))
            elif right_through[r] == 2:
                arcs.append((nid(2 * int(r) + 1), sink, 1))
    for e, (t, r) in enumerate(tgf.edges):
        if not (a_mask[t] and b_mask[r]):
            continue
        tn, rn = nid(2 * t), nid(2 * r + 1)
        if tgf.flow[e] > 0:
            arcs.append((tn, rn, 1))  # reversal: cancel existing flow
        else:
            arcs.append((rn, tn, 1))  # add new flow
        middle.append((len(arcs) - 1, e))
    net = FlowNetwork(len(node_ids), source, sink, arcs)
    flow = solve_max_flow(net)
    delta = np.zeros(len(tgf.edges), dtype=np.int64)
    for arc_ix, e in middle:
        if flow.values[arc_ix]:
            delta[e] = -1 if tgf.flow[e] > 0 else 1
    return delta, flow.value


def balance_left(tg: TypeGraph, a_mask: np.ndarray, b_mask: np.ndarray,
                 tgf: TypeGraphFlow) -> tuple[np.ndarray, int]:
    """Redirect flow from types carrying two units into types carrying none,
    within A x B; returns per-edge flow deltas and the augmentation value."""
    return _balance(tg, a_mask, b_mask, tgf, balance_left_side=True)


def balance_right(tg: TypeGraph, a_mask: np.ndarray, b_mask: np.ndarray,
                  tgf: TypeGraphFlow) -> tuple[np.ndarray, int]:
    """Mirror of balance_left for offline nodes (fills 0-unit offline nodes
    from 2-unit ones)."""
    return _balance(tg, a_mask, b_mask, tgf, balance_left_side=False)


def bahmani_preprocess(tg: TypeGraph) -> BlueRed:
    net, flow, tgf = feldman_flow(tg)
    cut = min_cut_source_side(net, flow)
    right0, left0 = 1, 1 + tg.right_count
    s_left = np.zeros(tg.left_count, dtype=bool)
    s_right = np.zeros(tg.right_count, dtype=bool)
    for node in cut:
        if right0 <= node < left0:
            s_right[node - right0] = True
        elif left0 <= node < left0 + tg.left_count:
            s_left[node - left0] = True
    delta_l, _ = balance_left(tg, ~s_left, ~s_right, tgf)   # T-side
    delta_r, _ = balance_right(tg, s_left, s_right, tgf)    # S-side
    combined = tgf.flow + delta_l + delta_r
    support = [e for e, f in zip(tgf.edges, combined) if f > 0]
    return blue_red_decomposition(tg.left_count, tg.right_count, support)
