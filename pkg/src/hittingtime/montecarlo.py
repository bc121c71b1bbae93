"""Monte Carlo estimate of hitting times by direct simulation.

Each walk draws from its own SplitMix64 stream keyed on
``(seed, source, walk index)``, so a walk's path does not depend on how
walks are spread over threads. Neighbours are sampled in proportion to
edge weight by binary search over per-node cumulative probabilities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .errors import GraphNotConnected, TargetInSources, TargetOutOfRange
from .graph import Graph, is_connected

__all__ = ["WalkStats", "simulate", "walk_lengths", "DEFAULT_STEP_CAP"]

DEFAULT_STEP_CAP = 100_000_000

# the bundled TBB is too old for numba and only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@numba.njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@numba.njit(cache=True)
def _stream_key(seed, source, walk):
    k = _mix(np.uint64(seed) + _GOLDEN)
    k = _mix(k + np.uint64(source) * _GOLDEN)
    return _mix(k ^ (np.uint64(walk) + _GOLDEN))


@numba.njit(cache=True, parallel=True)
def _walks(indptr, indices, cumprob, target, source, seed, first_walk, n_walks,
           step_cap):
    out = np.empty(n_walks, dtype=np.int64)
    for k in numba.prange(n_walks):
        state = _stream_key(seed, source, first_walk + k)
        c = source
        steps = 0
        while True:
            lo = indptr[c]
            hi = indptr[c + 1]
            if hi - lo == 1:
                c = indices[lo]
            else:
                state += _GOLDEN
                u = (_mix(state) >> _S11) * _INV53
                # first slot whose cumulative probability exceeds u
                a = lo
                b = hi - 1
                while a < b:
                    m = (a + b) >> 1
                    if cumprob[m] > u:
                        b = m
                    else:
                        a = m + 1
                c = indices[a]
            steps += 1
            if c == target:
                break
            if steps >= step_cap:
                steps = -1
                break
        out[k] = steps
    return out


def _cumulative_probabilities(g: Graph) -> np.ndarray:
    """Per-row cumulative transition probabilities, last entry exactly 1."""
    out = []
    for row in g.adjacency:
        weights = [w for _, w in row]
        if all(w == weights[0] for w in weights):
            d = len(weights)
            out += [float(Fraction(k, d)) for k in range(1, d + 1)]
            continue
        exact = [Fraction(w) for w in weights]
        total = sum(exact)
        acc = Fraction(0)
        for w in exact:
            acc += w
            out.append(float(acc / total))
    return np.asarray(out, dtype=np.float64)


def walk_lengths(g: Graph, target: int, source: int, n_walks: int, seed: int,
                 step_cap: int = DEFAULT_STEP_CAP, first_walk: int = 0,
                 threads=None, cumprob=None) -> np.ndarray:
    """Step counts of ``n_walks`` walks from ``source``; ``-1`` marks a capped walk.

    Walk ``k`` of the batch uses stream index ``first_walk + k``, so a run
    can be split into batches without changing any individual walk.
    """
    indptr, indices, _ = g.csr
    if cumprob is None:
        cumprob = _cumulative_probabilities(g)
    if threads:
        numba.set_num_threads(min(int(threads), numba.config.NUMBA_NUM_THREADS))
    return _walks(indptr, indices, cumprob, int(target), int(source),
                  int(seed) & 0xFFFFFFFFFFFFFFFF, int(first_walk), int(n_walks),
                  int(step_cap))


@dataclass(frozen=True)
class WalkStats:
    """Per-source sample statistics of simulated hitting times.

    Capped walks are excluded from every aggregate and counted in
    ``capped`` (per source) and ``capped_walks`` (total).
    """

    target: int
    sources: tuple
    sample_mean: np.ndarray
    sample_variance: np.ndarray
    walk_count: np.ndarray
    std_error: np.ndarray
    capped: np.ndarray
    seed: int
    step_cap: int

    @property
    def capped_walks(self) -> int:
        return int(self.capped.sum())

    def rows(self):
        for i, s in enumerate(self.sources):
            yield (s, float(self.sample_mean[i]), float(self.sample_variance[i]),
                   float(self.std_error[i]), int(self.walk_count[i]))


def _aggregate(lengths):
    """Exact mean and unbiased variance from integer step counts."""
    n = lengths.size
    if n == 0:
        return math.nan, math.nan
    if n == 1:
        return float(lengths[0]), 0.0
    total = int(lengths.sum())
    big = int(lengths.max())
    if big * big * n < 2**62:
        squares = int(np.dot(lengths, lengths))
    else:
        squares = sum(int(x) * int(x) for x in lengths)
    mean = Fraction(total, n)
    var = Fraction(n * squares - total * total, n * (n - 1))
    return float(mean), float(var)


def simulate(g: Graph, target: int, sources, walks_per_source: int, seed: int,
             step_cap: int = DEFAULT_STEP_CAP, threads=None) -> WalkStats:
    """Run ``walks_per_source`` independent walks from every source to ``target``.

    Parameters
    ----------
    g : Graph
        Connected graph.
    target : int
    sources : sequence of int
        Start nodes; must not contain ``target``.
    walks_per_source : int
    seed : int
        Root of the per-walk random streams.
    step_cap : int
        Walks still running after this many steps are abandoned.
    threads : int, optional
        Worker threads for the walk kernel; does not affect the result.

    Returns
    -------
    WalkStats
    """
    if not 0 <= target < g.node_count:
        raise TargetOutOfRange(f"target {target!r} not in 0..{g.node_count - 1}")
    sources = tuple(int(s) for s in sources)
    if target in sources:
        raise TargetInSources(f"target {target} listed among sources")
    for s in sources:
        if not 0 <= s < g.node_count:
            raise TargetOutOfRange(f"source {s!r} not in 0..{g.node_count - 1}")
    if walks_per_source < 1:
        raise ValueError("walks_per_source must be >= 1")
    if step_cap < 1:
        raise ValueError("step_cap must be >= 1")
    if not is_connected(g):
        raise GraphNotConnected("graph is not connected")

    k = len(sources)
    means = np.empty(k)
    variances = np.empty(k)
    counts = np.empty(k, dtype=np.int64)
    capped = np.empty(k, dtype=np.int64)
    cumprob = _cumulative_probabilities(g)
    for i, s in enumerate(sources):
        lengths = walk_lengths(g, target, s, walks_per_source, seed, step_cap,
                               threads=threads, cumprob=cumprob)
        ok = lengths[lengths >= 0]
        capped[i] = lengths.size - ok.size
        counts[i] = ok.size
        means[i], variances[i] = _aggregate(ok)
    with np.errstate(invalid="ignore", divide="ignore"):
        stderr = np.sqrt(variances / counts)
    return WalkStats(target, sources, means, variances, counts, stderr, capped,
                     int(seed), int(step_cap))
