"""Rounding and repair transforms for the LP-based list policy.

``gandhi_round`` performs dependent randomized rounding of a fractional
bipartite edge vector along cycles and maximal paths: each step shifts the
two alternating edge classes in opposite directions by one of two candidate
amounts, chosen with odds that keep every edge's expectation unchanged,
while node sums stay within floor/ceil of their fractional values.

``break_cycles`` and ``second_modification`` then rewrite the third-integral
vector: length-4 cycles with at most one 2/3 edge are dissolved exactly
(node totals preserved), after which fully saturated local patterns receive
hand-tuned probabilities, including the two constants 0.2744 and 0.15877.
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import Xoshiro256

_TOL = 1e-9

X1 = 0.2744
X2 = 0.15877


def _is_fractional(v: float) -> bool:
    f = v - math.floor(v)
    return _TOL < f < 1.0 - _TOL


def _find_cycle(adj: dict[int, dict[int, int]]) -> list[int] | None:
    """Edge ids of some cycle in the fractional support, or None.

    Discovery-order DFS, so in this undirected graph every non-tree edge
    closes a cycle with the ancestor chain.
    """
    seen: set[int] = set()
    for root in sorted(adj):
        if root in seen:
            continue
        parents: dict[int, tuple[int, int]] = {root: (-1, -1)}
        seen.add(root)
        frames = [(root, iter(sorted(adj[root])))]
        while frames:
            node, neighbors = frames[-1]
            advanced = False
            for nb in neighbors:
                e = adj[node][nb]
                if e == parents[node][1]:
                    continue
                if nb in seen:
                    cycle = [e]
                    cur = node
                    while cur != nb:
                        pn, pe = parents[cur]
                        cycle.append(pe)
                        cur = pn
                    return cycle
                parents[nb] = (node, e)
                seen.add(nb)
                frames.append((nb, iter(sorted(adj[nb]))))
                advanced = True
                break
            if not advanced:
                frames.pop()
    return None


def _leaf_path(adj: dict[int, dict[int, int]]) -> list[int]:
    """Edge ids of a maximal path in a forest, walked leaf to leaf."""
    leaf = min(n for n in adj if len(adj[n]) == 1)
    path = []
    prev, cur = -1, leaf
    while True:
        step = [(nb, e) for nb, e in sorted(adj[cur].items()) if nb != prev]
        if not step:
            return path
        nb, e = step[0]
        path.append(e)
        prev, cur = cur, nb


def gandhi_round(edge_left: np.ndarray, edge_right: np.ndarray,
                 values: np.ndarray, rng: Xoshiro256) -> np.ndarray:
    """Round a fractional bipartite edge vector to integers.

    Every entry lands on floor or ceil of its input, per-edge expectations
    are preserved, and per-node sums stay within floor/ceil of the
    fractional node sums.  Cycles are rounded before paths so that path
    endpoints are always true leaves of the remaining fractional forest.
    """
    vals = np.asarray(values, dtype=float).copy()
    if np.any(vals < -_TOL) or np.any(vals > 3.0 + _TOL):
        raise ValueError("values outside [0, 3]")
    ends = [(2 * int(l), 2 * int(r) + 1)
            for l, r in zip(edge_left, edge_right)]
    adj: dict[int, dict[int, int]] = {}
    for e, (a, b) in enumerate(ends):
        if _is_fractional(vals[e]):
            adj.setdefault(a, {})[b] = e
            adj.setdefault(b, {})[a] = e

    def settle(edge_ids: list[int]) -> None:
        m1 = [e for i, e in enumerate(edge_ids) if i % 2 == 0]
        m2 = [e for i, e in enumerate(edge_ids) if i % 2 == 1]
        up_gap = [math.ceil(vals[e]) - vals[e] for e in m1]
        down_gap = [vals[e] - math.floor(vals[e]) for e in m1]
        alpha = min(up_gap)
        beta = min(down_gap)
        if m2:
            alpha = min(alpha, min(vals[e] - math.floor(vals[e]) for e in m2))
            beta = min(beta, min(math.ceil(vals[e]) - vals[e] for e in m2))
        if rng.random() < beta / (alpha + beta):
            d1, d2 = alpha, -alpha
        else:
            d1, d2 = -beta, beta
        for e in m1:
            vals[e] += d1
        for e in m2:
            vals[e] += d2
        for e in edge_ids:
            snapped = round(vals[e])
            if abs(vals[e] - snapped) <= 10 * _TOL:
                vals[e] = float(snapped)
            if not _is_fractional(vals[e]):
                a, b = ends[e]
                adj[a].pop(b, None)
                adj[b].pop(a, None)
                if not adj[a]:
                    del adj[a]
                if not adj[b]:
                    del adj[b]

    while True:
        cycle = _find_cycle(adj)
        if cycle is None:
            break
        settle(cycle)
    while adj:
        settle(_leaf_path(adj))
    return np.rint(vals).astype(np.int64)


def break_cycles(edge_left: np.ndarray, edge_right: np.ndarray,
                 thirds: np.ndarray) -> np.ndarray:
    """Dissolve 4-cycles with exactly one 2/3 edge, then all-1/3 ones.

    Operates on integer thirds; per-node totals are preserved exactly by
    each transformation.  Cycles with two 2/3 edges are never touched.
    """
    h: dict[tuple[int, int], int] = {}
    for l, r, w in zip(edge_left, edge_right, thirds):
        if w > 0:
            h[(int(l), int(r))] = int(w)

    def scan() -> tuple[str, int, int, int, int] | None:
        pair_types: dict[tuple[int, int], list[int]] = {}
        nbrs: dict[int, list[int]] = {}
        for (t, r) in h:
            nbrs.setdefault(t, []).append(r)
        c3 = None
        for t in sorted(nbrs):
            rs = sorted(nbrs[t])
            for i in range(len(rs)):
                for j in range(i + 1, len(rs)):
                    pair_types.setdefault((rs[i], rs[j]), []).append(t)
        for (r1, r2) in sorted(pair_types):
            types = pair_types[(r1, r2)]
            for i in range(len(types)):
                for j in range(i + 1, len(types)):
                    ta, tb = types[i], types[j]
                    vals = (h[(ta, r1)], h[(ta, r2)], h[(tb, r1)], h[(tb, r2)])
                    thick = sum(1 for v in vals if v == 2)
                    if thick == 1:
                        return ("c2", ta, tb, r1, r2)
                    if thick == 0 and c3 is None:
                        c3 = ("c3", ta, tb, r1, r2)
        return c3

    while True:
        found = scan()
        if found is None:
            break
        kind, ta, tb, r1, r2 = found
        if kind == "c2":
            for t in (ta, tb):
                for r in (r1, r2):
                    if h[(t, r)] == 2:
                        t_thick, r_thick = t, r
            t_other = tb if t_thick == ta else ta
            r_other = r2 if r_thick == r1 else r1
            h[(t_thick, r_thick)] = 1
            h[(t_thick, r_other)] = 2
            h[(t_other, r_thick)] = 2
            del h[(t_other, r_other)]
        else:
            h[(ta, r1)] = 2
            h[(tb, r2)] = 2
            del h[(ta, r2)]
            del h[(tb, r1)]

    out = np.zeros(len(edge_left), dtype=np.int64)
    for e, (l, r) in enumerate(zip(edge_left, edge_right)):
        out[e] = h.get((int(l), int(r)), 0)
    return out


# Reassignment table keyed by the multiset of (edge thirds, offline total
# thirds) around one type.  Only fully saturated patterns appear; everything
# else keeps its value.
_TWO_EDGE = {
    ((1, 1), (2, 3)): {(1, 1): 0.1, (2, 3): 0.9},
    ((1, 2), (2, 3)): {(1, 2): 0.15, (2, 3): 0.85},
    ((1, 3), (2, 2)): {(1, 3): 0.4, (2, 2): 0.6},
    ((1, 1), (2, 2)): {(1, 1): 0.25, (2, 2): 0.75},
    ((1, 2), (2, 2)): {(1, 2): 0.3, (2, 2): 0.7},
}
_THREE_EDGE = {
    ((1, 1), (1, 3), (1, 3)): {(1, 1): 0.1, (1, 3): 0.45},
    ((1, 2), (1, 3), (1, 3)): {(1, 2): 0.2, (1, 3): 0.4},
    ((1, 1), (1, 2), (1, 3)): {(1, 1): 0.15, (1, 2): 0.2, (1, 3): 0.65},
    ((1, 1), (1, 1), (1, 3)): {(1, 1): 0.1, (1, 3): 0.8},
    ((1, 2), (1, 2), (1, 3)): {(1, 2): 0.25, (1, 3): 0.5},
}


def second_modification(edge_left: np.ndarray, edge_right: np.ndarray,
                        thirds: np.ndarray, right_count: int) -> np.ndarray:
    """Reassign edge probabilities for types matching the saturated patterns.

    The (2/3-edge, 1/3-edge) type whose thin neighbor is fully saturated is
    split by that neighbor's composition: one thick companion gives the thin
    edge 0.2744, two thin companions give it 0.15877.  Unmatched patterns
    keep h.
    """
    thirds = np.asarray(thirds)
    right_total = np.zeros(right_count, dtype=np.int64)
    right_edges: dict[int, list[int]] = {}
    for e, (r, w) in enumerate(zip(edge_right, thirds)):
        if w > 0:
            right_total[int(r)] += int(w)
            right_edges.setdefault(int(r), []).append(e)
    out = thirds / 3.0
    by_type: dict[int, list[int]] = {}
    for e, (t, w) in enumerate(zip(edge_left, thirds)):
        if w > 0:
            by_type.setdefault(int(t), []).append(e)
    for t, edge_ids in by_type.items():
        keyed = sorted(
            (int(thirds[e]), int(right_total[int(edge_right[e])]), e)
            for e in edge_ids)
        key = tuple((w, tot) for w, tot, _ in keyed)
        if key == ((1, 3), (2, 3)):
            thin_e = keyed[0][2]
            thick_e = keyed[1][2]
            companions = sorted(int(thirds[e])
                                for e in right_edges[int(edge_right[thin_e])]
                                if e != thin_e)
            if companions == [2]:
                out[thin_e] = X1
                out[thick_e] = 1.0 - X1
            elif companions == [1, 1]:
                out[thin_e] = X2
                out[thick_e] = 1.0 - X2
            continue
        table = _TWO_EDGE.get(key) if len(key) == 2 else _THREE_EDGE.get(key)
        if table is None:
            continue
        for w, tot, e in keyed:
            out[e] = table[(w, tot)]
    return out
