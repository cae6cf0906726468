"""Type-graph families, stand-alone constructions, and bipartite conversions.

Families (Erdos-Renyi, regular, degree-sequence, preferential attachment)
have a density parameter and are regenerated per trial; stand-alone graphs
are either fixed (upper-triangular, the two hard instances) or random with
fixed construction constants (groups, rope, hexagons, Zipf).  Non-bipartite
graphs are converted with the duplicating method (bipartite double cover) or
a uniformly random balanced partition keeping cross edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import TypeGraph
from .rng import Xoshiro256, binomial_cdf, sample_cdf, uniform_matrix

FAMILIES = ("erdos_renyi", "left_regular", "right_regular", "molloy_reed",
            "pref_attach")
STAND_ALONE = ("ut", "mh", "fh", "fewg", "manyg", "rope", "hexa", "zipf")
DETERMINISTIC = ("ut", "mh", "fh")

ROPE_D = 6
ZIPF_D = 6
FEWG_GROUPS = 32
MANYG_GROUPS = 256


class ParamError(ValueError):
    """A family precondition was violated; the message names it."""


@dataclass
class FamilySpec:
    """One generator invocation: family tag, size, parameters, seed."""

    family: str
    n: int
    c: float | None = None
    d: int | None = None
    tau: float | None = None
    kappa: float | None = None
    seed: int = 0

    def params(self) -> dict[str, float | int]:
        out: dict[str, float | int] = {"n": self.n}
        for k in ("c", "d", "tau", "kappa"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        return out


@dataclass
class GeneralGraph:
    """Simple undirected graph: no self-loops, no duplicate edges."""

    node_count: int
    edges: list[tuple[int, int]]  # u < v

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < v < self.node_count):
                raise ValueError(f"bad edge ({u}, {v})")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))


def _rows_to_graph(rows: list[np.ndarray], right_count: int,
                   m: int | None = None) -> TypeGraph:
    tg = TypeGraph(len(rows), right_count, rows,
                   len(rows) if m is None else m)
    return tg


def gen_erdos_renyi(n: int, c: float, rng: Xoshiro256) -> TypeGraph:
    if n < 1:
        raise ParamError("erdos_renyi requires n >= 1")
    if c < 0:
        raise ParamError("erdos_renyi requires c >= 0")
    p = min(c / n, 1.0)
    if p == 0.0:
        return _rows_to_graph([np.empty(0, dtype=np.int32)] * n, n)
    u = uniform_matrix(rng.next_u64(), n, n)
    rows = [np.flatnonzero(u[i] < p).astype(np.int32) for i in range(n)]
    return _rows_to_graph(rows, n)


def gen_left_regular(n: int, d: int, rng: Xoshiro256) -> TypeGraph:
    if not 0 <= d <= n:
        raise ParamError(f"left_regular requires 0 <= d <= n, got d={d}")
    rows = [rng.sample_distinct(n, d) for _ in range(n)]
    return _rows_to_graph(rows, n)


def gen_right_regular(n: int, d: int, rng: Xoshiro256) -> TypeGraph:
    if not 0 <= d <= n:
        raise ParamError(f"right_regular requires 0 <= d <= n, got d={d}")
    buckets: list[list[int]] = [[] for _ in range(n)]
    for r in range(n):
        for t in rng.sample_distinct(n, d):
            buckets[int(t)].append(r)
    rows = [np.array(sorted(b), dtype=np.int32) for b in buckets]
    return _rows_to_graph(rows, n)


def plcutoff_cdf(tau: float, kappa: float, nmax: int) -> np.ndarray:
    """CDF of the power law with exponential cutoff on degrees [1, nmax]."""
    if tau <= 0 or kappa <= 0:
        raise ParamError("power-law cutoff requires tau > 0 and kappa > 0")
    d = np.arange(1, nmax + 1, dtype=float)
    w = d ** -tau * np.exp(-d / kappa)
    cdf = np.cumsum(w / w.sum())
    cdf[-1] = 1.0
    return cdf


def sample_degree_plcutoff(tau: float, kappa: float, nmax: int,
                           rng: Xoshiro256,
                           cdf: np.ndarray | None = None) -> int:
    """One degree draw, >= 1 always (zero carries no mass)."""
    if cdf is None:
        cdf = plcutoff_cdf(tau, kappa, nmax)
    return 1 + sample_cdf(cdf, rng)


def gen_molloy_reed(n: int, tau: float, kappa: float,
                    rng: Xoshiro256) -> TypeGraph:
    """Stub pairing with degree resampling to fix odd totals and 100 retries
    per edge to avoid self-loops and parallels, then a random balanced
    partition keeping cross edges."""
    if n < 2:
        raise ParamError("molloy_reed requires n >= 2")
    cdf = plcutoff_cdf(tau, kappa, n)
    stubs = [sample_degree_plcutoff(tau, kappa, n, rng, cdf) for _ in range(n)]
    while sum(stubs) % 2 == 1:
        v = rng.randrange(n)
        stubs[v] = sample_degree_plcutoff(tau, kappa, n, rng, cdf)
    active = [v for v in range(n) if stubs[v] > 0]
    pos = {v: i for i, v in enumerate(active)}

    def consume(v: int, units: int) -> None:
        stubs[v] -= units
        if stubs[v] == 0:
            last = active[-1]
            i = pos.pop(v)
            active[i] = last
            active.pop()
            if last != v:
                pos[last] = i

    edge_set: set[tuple[int, int]] = set()
    while active:
        for attempt in range(100):
            i = active[rng.randrange(len(active))]
            j = active[rng.randrange(len(active))]
            structurally_ok = i != j or stubs[i] >= 2
            if not structurally_ok:
                continue
            key = (min(i, j), max(i, j))
            if i != j and key not in edge_set:
                break
            if attempt == 99 and structurally_ok:
                break  # give up: accept the loop or parallel edge
        else:
            continue  # no structurally valid pair sampled; try again
        if i == j:
            consume(i, 2)  # self-loop, removed at the end
        else:
            edge_set.add((min(i, j), max(i, j)))  # parallels merge here
            consume(i, 1)
            consume(j, 1)
    g = GeneralGraph(n, sorted(edge_set))
    return convert_random_partition(g, rng)


def gen_pref_attach(n: int, c: float, rng: Xoshiro256) -> TypeGraph:
    """Each new type draws Bin(n, c/n) distinct offline neighbors with
    probability proportional to one plus current offline degree."""
    if n < 1:
        raise ParamError("pref_attach requires n >= 1")
    if c < 0:
        raise ParamError("pref_attach requires c >= 0")
    cdf = binomial_cdf(n, min(c / n, 1.0))
    slots: list[int] = []  # node j appears once per unit of degree
    rows: list[np.ndarray] = []
    for _ in range(n):
        z = sample_cdf(cdf, rng)
        chosen: set[int] = set()
        while len(chosen) < z:
            k = rng.randrange(n + len(slots))
            chosen.add(k if k < n else slots[k - n])
        row = sorted(chosen)
        rows.append(np.array(row, dtype=np.int32))
        slots.extend(row)
    return _rows_to_graph(rows, n)


def _gen_ut(n: int) -> TypeGraph:
    rows = [np.arange(j + 1, dtype=np.int32) for j in range(n)]
    return _rows_to_graph(rows, n)


def _gen_mh(n: int) -> TypeGraph:
    extra = round(n / math.e)
    full = np.arange(n, dtype=np.int32)
    rows = [np.array([i], dtype=np.int32) for i in range(n)]
    rows.extend([full] * extra)
    return _rows_to_graph(rows, n, m=n + extra)


def _gen_fh(n: int) -> TypeGraph:
    if n % 4:
        raise ParamError(f"fh requires n divisible by 4, got {n}")
    q = n // 4
    # left blocks: X, Y, Z, I ; right blocks: U, V, W, K (each of size q).
    # Both sides list the 6-cycle blocks before the biclique blocks, so
    # adjacency, and hence the augmenting order of the preprocessing flows,
    # follows the construction: cycles first, bicliques last.  (The flow
    # found then routes through the cycles, which is what makes this the
    # hard instance for the blue/red policies.)
    w_block = np.arange(2 * q, 3 * q, dtype=np.int32)
    k_block = np.arange(3 * q, 4 * q, dtype=np.int32)
    rows: list[np.ndarray] = []
    for i in range(q):          # X: the cycle nodes u_i, v_i plus all of K
        rows.append(np.concatenate([np.array([i, q + i], dtype=np.int32),
                                    k_block]))
    for i in range(q):          # Y: v_i and w_i
        rows.append(np.array([q + i, 2 * q + i], dtype=np.int32))
    for i in range(q):          # Z: u_i and w_i
        rows.append(np.array([i, 2 * q + i], dtype=np.int32))
    rows.extend([w_block] * q)  # I: complete to W
    return _rows_to_graph(rows, n)


def _gen_groups(n: int, groups: int, rng: Xoshiro256) -> TypeGraph:
    if n % groups:
        raise ParamError(f"group graph requires n divisible by {groups}, got {n}")
    size = n // groups
    perm = rng.permutation(n)
    y_cdf = binomial_cdf(10, 0.5)  # mean 5 neighbors
    rows: list[np.ndarray | None] = [None] * n
    for g in range(groups):
        union = np.concatenate([
            np.arange(((g + off) % groups) * size,
                      ((g + off) % groups) * size + size, dtype=np.int32)
            for off in (-1, 0, 1)])
        for s in range(size):
            t = int(perm[g * size + s])
            y = min(sample_cdf(y_cdf, rng), len(union))
            pick = rng.sample_distinct(len(union), y)
            rows[t] = np.sort(union[pick])
    return _rows_to_graph(rows, n)


def _gen_rope(n: int, rng: Xoshiro256) -> TypeGraph:
    """Blocks of size 6 strung into a rope: block i of types is joined to
    block i+1 of offline nodes, alternately by a uniform perfect matching
    (starting with one) and by a random bipartite block where each of the
    d*d edges appears with probability (d-1)/d; the last type block joins
    the last offline block with whichever connection the alternation
    assigns.  Offline block 0 stays bare."""
    if n % ROPE_D:
        raise ParamError(f"rope requires n divisible by {ROPE_D}, got {n}")
    d = ROPE_D
    t_blocks = n // d
    rows: list[set[int]] = [set() for _ in range(n)]

    def connect(left_block: int, right_block: int, perfect: bool) -> None:
        lo_l, lo_r = left_block * d, right_block * d
        if perfect:
            perm = rng.permutation(d)
            for i in range(d):
                rows[lo_l + i].add(lo_r + int(perm[i]))
        else:
            thresh = (d - 1) / d
            for i in range(d):
                for j in range(d):
                    if rng.random() < thresh:
                        rows[lo_l + i].add(lo_r + j)

    for i in range(t_blocks - 1):
        connect(i, i + 1, perfect=i % 2 == 0)
    connect(t_blocks - 1, t_blocks - 1, perfect=(t_blocks - 1) % 2 == 0)
    return _rows_to_graph([np.array(sorted(r), dtype=np.int32) for r in rows], n)


def _gen_hexa(n: int, rng: Xoshiro256) -> TypeGraph:
    s = math.isqrt(n)
    if s * s != n:
        raise ParamError(f"hexa requires a perfect-square n, got {n}")
    rows: list[set[int]] = [set() for _ in range(n)]
    for i in range(s):
        for j in range(s):
            lefts = i * s + rng.sample_distinct(s, 3)
            rights = j * s + rng.sample_distinct(s, 3)
            lsel = lefts[rng.permutation(3)]
            rsel = rights[rng.permutation(3)]
            for t in range(3):
                rows[int(lsel[t])].add(int(rsel[t]))
                rows[int(lsel[t])].add(int(rsel[t - 1]))
    return _rows_to_graph([np.array(sorted(r), dtype=np.int32) for r in rows], n)


def _gen_zipf(n: int, rng: Xoshiro256) -> TypeGraph:
    scale = n * ZIPF_D / math.log(n) ** 2
    u = uniform_matrix(rng.next_u64(), n, n)
    inv_j = 1.0 / np.arange(1, n + 1, dtype=float)
    rows = []
    for i in range(n):
        p = np.minimum(scale / (i + 1) * inv_j, 1.0)
        rows.append(np.flatnonzero(u[i] < p).astype(np.int32))
    return _rows_to_graph(rows, n)


def gen_stand_alone(kind: str, n: int, rng: Xoshiro256) -> TypeGraph:
    if n < 1:
        raise ParamError("stand-alone graphs require n >= 1")
    if kind == "ut":
        return _gen_ut(n)
    if kind == "mh":
        return _gen_mh(n)
    if kind == "fh":
        return _gen_fh(n)
    if kind == "fewg":
        return _gen_groups(n, FEWG_GROUPS, rng)
    if kind == "manyg":
        return _gen_groups(n, MANYG_GROUPS, rng)
    if kind == "rope":
        return _gen_rope(n, rng)
    if kind == "hexa":
        return _gen_hexa(n, rng)
    if kind == "zipf":
        return _gen_zipf(n, rng)
    raise ParamError(f"unknown stand-alone graph {kind!r}")


def convert_duplicating(g: GeneralGraph) -> TypeGraph:
    """Bipartite double cover: both sides are copies of the vertex set."""
    rows: list[list[int]] = [[] for _ in range(g.node_count)]
    for u, v in g.edges:
        rows[u].append(v)
        rows[v].append(u)
    return _rows_to_graph(
        [np.array(sorted(r), dtype=np.int32) for r in rows], g.node_count)


def convert_random_partition(g: GeneralGraph, rng: Xoshiro256) -> TypeGraph:
    """Split the vertices uniformly into halves; keep only cross edges."""
    if g.node_count < 2:
        raise ParamError("random partition requires at least 2 nodes")
    perm = rng.permutation(g.node_count)
    half = g.node_count // 2
    side = np.zeros(g.node_count, dtype=bool)  # True = right
    index = np.zeros(g.node_count, dtype=np.int64)
    for i, v in enumerate(perm):
        side[v] = i >= half
        index[v] = i if i < half else i - half
    rows: list[list[int]] = [[] for _ in range(half)]
    for u, v in g.edges:
        if side[u] != side[v]:
            left, right = (v, u) if side[u] else (u, v)
            rows[int(index[left])].append(int(index[right]))
    return _rows_to_graph(
        [np.array(sorted(r), dtype=np.int32) for r in rows],
        g.node_count - half)


def generate(spec: FamilySpec) -> TypeGraph:
    """Dispatch a FamilySpec to its generator with a fresh seeded stream."""
    rng = Xoshiro256(spec.seed)
    fam = spec.family
    if fam == "erdos_renyi":
        if spec.c is None:
            raise ParamError("erdos_renyi requires parameter c")
        return gen_erdos_renyi(spec.n, spec.c, rng)
    if fam == "left_regular" or fam == "right_regular":
        if spec.d is None:
            raise ParamError(f"{fam} requires parameter d")
        gen = gen_left_regular if fam == "left_regular" else gen_right_regular
        return gen(spec.n, spec.d, rng)
    if fam == "molloy_reed":
        if spec.tau is None or spec.kappa is None:
            raise ParamError("molloy_reed requires parameters tau and kappa")
        return gen_molloy_reed(spec.n, spec.tau, spec.kappa, rng)
    if fam == "pref_attach":
        if spec.c is None:
            raise ParamError("pref_attach requires parameter c")
        return gen_pref_attach(spec.n, spec.c, rng)
    if fam in STAND_ALONE:
        return gen_stand_alone(fam, spec.n, rng)
    raise ParamError(f"unknown family {spec.family!r}")
