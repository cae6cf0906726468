"""Edmonds-Karp maximum flow with pinned, classic tie-breaking.

The advice computed by the flow-based policies depends on *which* maximum
flow is found, so the augmenting order is part of the contract: each input
arc contributes a forward and a reverse residual arc in insertion order,
every BFS scans a node's residual arcs in that order, and the first
shortest path discovered is augmented.  The same integer algorithm is
provided twice: a pure-Python reference and a numba-compiled twin used when
numba is importable; both produce identical flows.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


def _prepare(node_count: int, arc_from: np.ndarray, arc_to: np.ndarray,
             caps: np.ndarray):
    """Residual arc arrays: ids 2k / 2k+1 are input arc k and its reverse;
    per-node adjacency lists arcs in global insertion order."""
    m = len(arc_from)
    to = np.empty(2 * m, dtype=np.int64)
    res = np.empty(2 * m, dtype=np.int64)
    frm = np.empty(2 * m, dtype=np.int64)
    to[0::2] = arc_to
    to[1::2] = arc_from
    frm[0::2] = arc_from
    frm[1::2] = arc_to
    res[0::2] = caps
    res[1::2] = 0
    order = np.argsort(frm, kind="stable")
    start = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(frm, minlength=node_count), out=start[1:])
    return to, res, start, order.astype(np.int64)


def _ek_python(node_count, source, sink, to, res, start, order):
    parent = np.empty(node_count, dtype=np.int64)
    queue = np.empty(node_count, dtype=np.int64)
    total = 0
    while True:
        parent[:] = -1
        parent[source] = -2
        queue[0] = source
        head, tail = 0, 1
        found = False
        while head < tail and not found:
            u = queue[head]
            head += 1
            for k in range(start[u], start[u + 1]):
                a = order[k]
                v = to[a]
                if res[a] > 0 and parent[v] == -1:
                    parent[v] = a
                    if v == sink:
                        found = True
                        break
                    queue[tail] = v
                    tail += 1
        if not found:
            return total
        bottleneck = None
        v = sink
        while v != source:
            a = parent[v]
            if bottleneck is None or res[a] < bottleneck:
                bottleneck = res[a]
            v = to[a ^ 1]
        v = sink
        while v != source:
            a = parent[v]
            res[a] -= bottleneck
            res[a ^ 1] += bottleneck
            v = to[a ^ 1]
        total += bottleneck


@njit(cache=True)
def _ek_numba(node_count, source, sink, to, res, start, order):  # pragma: no cover
    parent = np.empty(node_count, dtype=np.int64)
    queue = np.empty(node_count, dtype=np.int64)
    total = 0
    while True:
        for i in range(node_count):
            parent[i] = -1
        parent[source] = -2
        queue[0] = source
        head, tail = 0, 1
        found = False
        while head < tail and not found:
            u = queue[head]
            head += 1
            for k in range(start[u], start[u + 1]):
                a = order[k]
                v = to[a]
                if res[a] > 0 and parent[v] == -1:
                    parent[v] = a
                    if v == sink:
                        found = True
                        break
                    queue[tail] = v
                    tail += 1
        if not found:
            return total
        bottleneck = -1
        v = sink
        while v != source:
            a = parent[v]
            if bottleneck < 0 or res[a] < bottleneck:
                bottleneck = res[a]
            v = to[a ^ 1]
        v = sink
        while v != source:
            a = parent[v]
            res[a] -= bottleneck
            res[a ^ 1] += bottleneck
            v = to[a ^ 1]
        total += bottleneck


def edmonds_karp_flow(node_count: int, source: int, sink: int,
                      arc_from: np.ndarray, arc_to: np.ndarray,
                      caps: np.ndarray,
                      force_python: bool = False) -> tuple[np.ndarray, int]:
    """Run Edmonds-Karp; returns (per-input-arc flow, flow value)."""
    if len(arc_from) == 0:
        return np.empty(0, dtype=np.int64), 0
    to, res, start, order = _prepare(node_count, arc_from, arc_to, caps)
    kernel = _ek_numba if (_HAVE_NUMBA and not force_python) else _ek_python
    value = kernel(node_count, source, sink, to, res, start, order)
    flows = caps.astype(np.int64) - res[0::2]
    return flows, int(value)


def resume_max_flow(node_count: int, source: int, sink: int,
                    arc_from: np.ndarray, arc_to: np.ndarray,
                    caps: np.ndarray, initial: np.ndarray,
                    force_python: bool = False) -> tuple[np.ndarray, int]:
    """Complete a feasible integral flow to a maximum one with Edmonds-Karp.

    ``initial`` is the warm-start flow per input arc; feasibility
    (0 <= initial <= caps, conservation) is the caller's responsibility.
    """
    if len(arc_from) == 0:
        return np.empty(0, dtype=np.int64), 0
    to, res, start, order = _prepare(node_count, arc_from, arc_to, caps)
    res[0::2] -= initial
    res[1::2] += initial
    if np.any(res < 0):
        raise ValueError("initial flow exceeds capacities")
    base = int(initial[arc_from == source].sum()
               - initial[arc_to == source].sum())
    kernel = _ek_numba if (_HAVE_NUMBA and not force_python) else _ek_python
    added = kernel(node_count, source, sink, to, res, start, order)
    flows = caps.astype(np.int64) - res[0::2]
    return flows, base + int(added)
