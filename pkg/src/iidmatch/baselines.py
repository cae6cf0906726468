"""Type-graph-oblivious online algorithms and the policy execution wrapper.

All of them are built on one primitive: greedily matching each arrival to its
unmatched neighbor of smallest rank under some permutation of the offline
side.  Multi-pass algorithms replay the same arrival sequence with a
reordered permutation.  ``execute_policy`` runs a preprocessing-based advice
policy in either its published non-greedy form ("vanilla") or with a greedy
fallback that never declines an available match.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from .graph import InstanceStream, Matching, Permutation
from .rng import Xoshiro256

DUMMY = -1  # sentinel suggestion: "leave unmatched", treated as pre-matched


class PolicyContractError(Exception):
    """A policy suggested a non-neighbor of the arriving type."""


class AdvicePolicy(Protocol):
    name: str

    def preprocess(self, tg, rng: Xoshiro256) -> object: ...

    def suggest(self, state: object, type_index: int, arrival_no: int,
                rng: Xoshiro256) -> list[int]: ...


def greedy_with_permutation(inst: InstanceStream, perm: Permutation) -> Matching:
    """Match each arrival to its unmatched neighbor of smallest rank."""
    tg = inst.graph
    if len(perm.rank) != tg.right_count:
        raise ValueError("permutation size does not match offline side")
    rank = perm.rank
    adj = tg.adj
    matched = np.zeros(tg.right_count, dtype=bool)
    out = Matching(len(inst.arrivals), tg.right_count)
    for i, t in enumerate(inst.arrivals):
        nbrs = adj[t]
        if not len(nbrs):
            continue
        avail = nbrs[~matched[nbrs]]
        if len(avail):
            r = int(avail[np.argmin(rank[avail])])
            matched[r] = True
            out.add(i, r)
    return out


def simple_greedy(inst: InstanceStream) -> Matching:
    """Greedy with the fixed index-order permutation of the offline side."""
    return greedy_with_permutation(inst, Permutation.identity(inst.graph.right_count))


def ranking(inst: InstanceStream, rng: Xoshiro256) -> Matching:
    """Greedy under a uniformly random permutation sampled before any arrival."""
    return greedy_with_permutation(inst, Permutation.random(inst.graph.right_count, rng))


def category_rank(base: Permutation, categories: np.ndarray) -> Permutation:
    """Reorder ``base`` so categories sort first, ties broken by base rank."""
    if len(categories) != len(base.rank):
        raise ValueError("category function size mismatch")
    order = np.lexsort((base.rank, categories))
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order), dtype=np.int64)
    return Permutation(rank)


def category_advice(inst: InstanceStream, sigma: Permutation) -> Matching:
    """Two passes: the second prefers offline nodes unmatched in the first."""
    first = greedy_with_permutation(inst, sigma)
    categories = np.where(first.match_of_right == -1, 1, 2)
    return greedy_with_permutation(inst, category_rank(sigma, categories))


def three_pass(inst: InstanceStream, sigma: Permutation) -> Matching:
    """Three passes; the third prefers nodes unmatched in both earlier passes,
    then nodes unmatched in the first pass, then the rest."""
    first = greedy_with_permutation(inst, sigma)
    cat2 = np.where(first.match_of_right == -1, 1, 2)
    second = greedy_with_permutation(inst, category_rank(sigma, cat2))
    free1 = first.match_of_right == -1
    free2 = second.match_of_right == -1
    cat3 = np.full(inst.graph.right_count, 3, dtype=np.int64)
    cat3[free1] = 2
    cat3[free1 & free2] = 1
    return greedy_with_permutation(inst, category_rank(sigma, cat3))


def execute_policy(inst: InstanceStream, policy: AdvicePolicy, state: object,
                   mode: str, rng: Xoshiro256) -> Matching:
    """Run an advice policy over one instance.

    vanilla: each arrival tries the policy's suggestions in order (dummies
    count as pre-matched) and stays unmatched if all fail.  greedy: same,
    then falls back to the lowest-index unmatched neighbor.  Suggestions are
    a function of (type, arrival number, randomness) only, so vanilla and
    greedy runs from equal-seeded generators are coupled.
    """
    if mode not in ("vanilla", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    greedy = mode == "greedy"
    tg = inst.graph
    adj = tg.adj
    matched = np.zeros(tg.right_count, dtype=bool)
    out = Matching(len(inst.arrivals), tg.right_count)
    seen = np.zeros(tg.left_count, dtype=np.int32)
    neighbor_sets: dict[int, frozenset[int]] = {}
    for i, t in enumerate(inst.arrivals):
        t = int(t)
        seen[t] += 1
        suggestions = policy.suggest(state, t, int(seen[t]), rng)
        chosen = -1
        for r in suggestions:
            if r == DUMMY:
                continue
            nset = neighbor_sets.get(t)
            if nset is None:
                nset = neighbor_sets[t] = frozenset(int(x) for x in adj[t])
            if r not in nset:
                raise PolicyContractError(
                    f"policy {policy.name!r} suggested non-neighbor {r} "
                    f"for type {t} at arrival {i}")
            if not matched[r]:
                chosen = r
                break
        if chosen == -1 and greedy:
            nbrs = adj[t]
            if len(nbrs):
                avail = nbrs[~matched[nbrs]]
                if len(avail):
                    chosen = int(avail[0])  # lists are sorted: lowest index
        if chosen != -1:
            matched[chosen] = True
            out.add(i, chosen)
    return out
