"""Deterministic pseudo-randomness for the whole suite.

Everything random in this package flows through one documented generator,
xoshiro256** seeded via the splitmix64 finalizer, so that a 64-bit master
seed reproduces every experiment bit-for-bit.  Named sub-streams are derived
with :func:`derive_seed`, never by splitting generator state, so adding an
algorithm to an experiment cannot perturb the randomness seen by another.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer: a 64-bit bijective scrambler."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """Derive the seed of a named sub-stream from ``seed`` and integer path.

    The path elements are folded in one at a time through mix64, so
    ``derive_seed(s, a, b)`` and ``derive_seed(s, a, c)`` are decorrelated
    for b != c, and the empty path is just a scramble of ``seed``.
    """
    s = mix64(seed & _MASK)
    for v in path:
        s = mix64((s + _GOLDEN) ^ ((v & _MASK) * _MIX1 & _MASK))
    return s


class Xoshiro256(object):
    """xoshiro256** generator; state seeded from ``seed`` via splitmix64."""

    __slots__ = ("seed", "_s")

    def __init__(self, seed: int):
        self.seed = seed & _MASK
        s = self.seed
        state = []
        for _ in range(4):
            s = (s + _GOLDEN) & _MASK
            state.append(mix64(s))
        self._s = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        x = (s1 * 5) & _MASK
        result = (((x << 7) | (x >> 57)) & _MASK) * 9 & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK
        self._s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform float64 in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = _MASK + 1 - ((_MASK + 1) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, seq) -> None:
        """In-place Fisher-Yates shuffle of a mutable sequence."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def permutation(self, n: int) -> np.ndarray:
        out = np.arange(n, dtype=np.int64)
        self.shuffle(out)
        return out

    def sample_distinct(self, n: int, k: int) -> np.ndarray:
        """k distinct integers from [0, n), returned sorted (Floyd's method)."""
        if k > n:
            raise ValueError(f"cannot sample {k} distinct values from {n}")
        chosen: set[int] = set()
        for j in range(n - k, n):
            t = self.randrange(j + 1)
            chosen.add(j if t in chosen else t)
        return np.array(sorted(chosen), dtype=np.int32)


def binomial_cdf(n: int, p: float) -> np.ndarray:
    """Cumulative Binomial(n, p) table for inverse-CDF sampling.

    Built with the multiplicative recurrence only (+,*,/), so the table is a
    pure function of (n, p) in IEEE double arithmetic.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p outside [0, 1]")
    if p == 0.0 or n == 0:
        return np.ones(n + 1)
    if p == 1.0:
        out = np.zeros(n + 1)
        out[-1] = 1.0
        return out
    q = 1.0 - p
    pmf = np.empty(n + 1)
    cur = 1.0
    for _ in range(n):
        cur *= q
    pmf[0] = cur
    ratio = p / q
    for k in range(n):
        cur *= (n - k) / (k + 1) * ratio
        pmf[k + 1] = cur
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    return cdf


def sample_cdf(cdf: np.ndarray, rng: Xoshiro256) -> int:
    return int(np.searchsorted(cdf, rng.random(), side="right"))


def uniform_matrix(seed: int, rows: int, cols: int) -> np.ndarray:
    """(rows, cols) matrix of uniforms in [0, 1), one xoshiro stream per row.

    Row streams are seeded from (seed, row) and advanced in lockstep with
    vectorized uint64 arithmetic, which keeps dense Bernoulli generators
    (Erdos-Renyi, Zipf) fast while staying exactly reproducible.
    """
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols))
    golden = np.uint64(_GOLDEN)
    mix1 = np.uint64(_MIX1)
    mix2 = np.uint64(_MIX2)

    def vmix(z):
        z = (z ^ (z >> np.uint64(30))) * mix1
        z = (z ^ (z >> np.uint64(27))) * mix2
        return z ^ (z >> np.uint64(31))

    base = np.uint64((mix64(seed & _MASK) + _GOLDEN) & _MASK)
    idx = np.arange(rows, dtype=np.uint64)
    s = vmix(base ^ (idx * mix1))
    state = []
    for _ in range(4):
        s = s + golden
        state.append(vmix(s))
    s0, s1, s2, s3 = state

    out = np.empty((rows, cols))
    five = np.uint64(5)
    nine = np.uint64(9)
    for j in range(cols):
        x = s1 * five
        result = ((x << np.uint64(7)) | (x >> np.uint64(57))) * nine
        t = s1 << np.uint64(17)
        s2 = s2 ^ s0
        s3 = s3 ^ s1
        s1 = s1 ^ s2
        s0 = s0 ^ s3
        s2 = s2 ^ t
        s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
        out[:, j] = (result >> np.uint64(11)) * 2.0 ** -53
    return out
