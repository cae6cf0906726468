"""Core bipartite types: type graphs, sampled instances, matchings, permutations.

A *type graph* is the side information given to the algorithms: ``left_count``
online types, ``right_count`` offline nodes, and per-type sorted neighbor
lists.  An *instance* is a replayable sequence of ``m`` i.i.d. uniform type
draws; the realized instance graph has one online node per draw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .rng import Xoshiro256


@dataclass
class TypeGraph:
    """Known-i.i.d. side information with uniform integral types."""

    left_count: int
    right_count: int
    adj: list[np.ndarray]  # per type, sorted distinct offline indices (int32)
    m: int

    @staticmethod
    def from_lists(neighbors: Sequence[Iterable[int]], right_count: int,
                   m: int | None = None) -> "TypeGraph":
        adj = [np.array(sorted(set(ns)), dtype=np.int32) for ns in neighbors]
        left = len(adj)
        return TypeGraph(left, right_count, adj, left if m is None else m)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj)

    def edges(self) -> Iterator[tuple[int, int]]:
        for t, ns in enumerate(self.adj):
            for r in ns:
                yield t, int(r)

    def degrees_right(self) -> np.ndarray:
        deg = np.zeros(self.right_count, dtype=np.int64)
        for ns in self.adj:
            deg[ns] += 1
        return deg


def validate_type_graph(tg: TypeGraph) -> str | None:
    """Return None if ``tg`` satisfies all invariants, else the first violation."""
    if tg.m < 0:
        return f"m is negative: {tg.m}"
    if tg.left_count != len(tg.adj):
        return f"left_count {tg.left_count} != adjacency rows {len(tg.adj)}"
    for t, ns in enumerate(tg.adj):
        if len(ns) == 0:
            continue
        if int(ns[0]) < 0 or int(ns[-1]) >= tg.right_count:
            bad = ns[0] if int(ns[0]) < 0 else ns[-1]
            return f"type {t}: neighbor {int(bad)} out of range [0, {tg.right_count})"
        if len(ns) > 1 and not np.all(ns[1:] > ns[:-1]):
            i = int(np.argmin(ns[1:] > ns[:-1]))
            return (f"type {t}: neighbor list not strictly increasing at "
                    f"position {i + 1} ({int(ns[i])} then {int(ns[i + 1])})")
    return None


@dataclass
class InstanceStream:
    """One realized arrival sequence; replayable for multi-pass algorithms."""

    graph: TypeGraph
    arrivals: np.ndarray  # int32 type indices, length graph.m
    seed: int

    def __len__(self) -> int:
        return len(self.arrivals)

    def type_counts(self) -> np.ndarray:
        return np.bincount(self.arrivals, minlength=self.graph.left_count)


def sample_instance(tg: TypeGraph, seed: int) -> InstanceStream:
    """Draw ``tg.m`` types i.i.d. uniformly from [0, left_count)."""
    rng = Xoshiro256(seed)
    if tg.m == 0:
        return InstanceStream(tg, np.empty(0, dtype=np.int32), seed)
    if tg.left_count == 0:
        raise ValueError("cannot sample arrivals from a graph with no types")
    arrivals = np.fromiter(
        (rng.randrange(tg.left_count) for _ in range(tg.m)),
        dtype=np.int32, count=tg.m)
    return InstanceStream(tg, arrivals, seed)


class Matching:
    """Partial matching of online arrivals to offline nodes.

    Both directions of lookup are O(1); -1 marks an unmatched endpoint.
    """

    __slots__ = ("match_of_online", "match_of_right", "size")

    def __init__(self, online_count: int, right_count: int):
        self.match_of_online = np.full(online_count, -1, dtype=np.int32)
        self.match_of_right = np.full(right_count, -1, dtype=np.int32)
        self.size = 0

    def add(self, online: int, right: int) -> None:
        if self.match_of_online[online] != -1:
            raise ValueError(f"online node {online} already matched")
        if self.match_of_right[right] != -1:
            raise ValueError(f"offline node {right} already matched")
        self.match_of_online[online] = right
        self.match_of_right[right] = online
        self.size += 1

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i, r in enumerate(self.match_of_online):
            if r != -1:
                yield i, int(r)


def matching_size(m: Matching) -> int:
    return m.size


@dataclass
class Permutation:
    """Ranking of offline nodes: rank[r] is the position of r under the order."""

    rank: np.ndarray

    def __post_init__(self):
        n = len(self.rank)
        if not np.array_equal(np.sort(self.rank), np.arange(n)):
            raise ValueError("rank is not a bijection on [0, n)")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(np.arange(n, dtype=np.int64))

    @staticmethod
    def random(n: int, rng: Xoshiro256) -> "Permutation":
        order = rng.permutation(n)  # order[k] = node with rank k
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n, dtype=np.int64)
        return Permutation(rank)


# Portable type-graph text format:
#   m <m> L <left_count> R <right_count>
#   <type_index>: <neighbor> <neighbor> ...      (one line per type)

def write_type_graph(tg: TypeGraph, fh: TextIO) -> None:
    fh.write(f"m {tg.m} L {tg.left_count} R {tg.right_count}\n")
    for t, ns in enumerate(tg.adj):
        fh.write(f"{t}:")
        if len(ns):
            fh.write(" " + " ".join(str(int(r)) for r in ns))
        fh.write("\n")


def read_type_graph(fh: TextIO) -> TypeGraph:
    header = fh.readline().split()
    if len(header) != 6 or header[0] != "m" or header[2] != "L" or header[4] != "R":
        raise ValueError("bad type-graph header, expected 'm <m> L <l> R <r>'")
    m, left, right = int(header[1]), int(header[3]), int(header[5])
    adj: list[np.ndarray] = [np.empty(0, dtype=np.int32)] * left
    seen = np.zeros(left, dtype=bool)
    for lineno, line in enumerate(fh, start=2):
        line = line.strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        try:
            t = int(head)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad type index {head!r}") from exc
        if not 0 <= t < left:
            raise ValueError(f"line {lineno}: type index {t} out of range")
        if seen[t]:
            raise ValueError(f"line {lineno}: duplicate line for type {t}")
        seen[t] = True
        adj[t] = np.array([int(x) for x in rest.split()], dtype=np.int32)
    tg = TypeGraph(left, right, adj, m)
    problem = validate_type_graph(tg)
    if problem is not None:
        raise ValueError(problem)
    return tg
