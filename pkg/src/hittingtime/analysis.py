"""Studies built on the solver: sorted curves, plateau splits, distances."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import TooFewNodes
from .graph import Graph
from .reduction import reduce
from .solver import DEFAULT_EPS, DEFAULT_MAX_ITERS, HittingMoments, moments

__all__ = [
    "HittingTable",
    "SortedCurve",
    "CommunitySplit",
    "DistanceReport",
    "hitting_table",
    "sorted_curve",
    "detect_split",
    "pairwise_distances",
]


@dataclass(frozen=True)
class HittingTable:
    """Mean and variance for every non-target node, in node-id order.

    Adherent nodes carry mean 1 and variance 0. ``solve`` is ``None`` when
    every non-target node is adherent.
    """

    target: int
    nodes: tuple
    mean: np.ndarray
    variance: np.ndarray
    solve: HittingMoments | None

    @property
    def converged(self) -> bool:
        return self.solve is None or self.solve.converged

    def mean_of(self, node: int) -> float:
        return float(self.mean[self.nodes.index(node)])


def hitting_table(g: Graph, target: int, eps: float = DEFAULT_EPS,
                  max_iters: int = DEFAULT_MAX_ITERS, threads=None) -> HittingTable:
    r = reduce(g, target)
    nodes = tuple(v for v in range(g.node_count) if v != r.target)
    mean = np.ones(len(nodes))
    variance = np.zeros(len(nodes))
    solve = None
    if not r.is_empty:
        solve = moments(r, eps, max_iters, threads=threads)
        pos = [nodes.index(s) for s in r.sources]
        mean[pos] = solve.mean
        variance[pos] = solve.variance
    return HittingTable(r.target, nodes, mean, variance, solve)


@dataclass(frozen=True)
class SortedCurve:
    """``entries`` are ``(node, mean)`` ascending by mean, then by node id."""

    target: int
    entries: tuple

    @property
    def nodes(self) -> list:
        return [v for v, _ in self.entries]

    @property
    def means(self) -> np.ndarray:
        return np.array([m for _, m in self.entries])


@dataclass(frozen=True)
class CommunitySplit:
    """Two groups separated at the widest gap of a sorted curve.

    ``boundary_index`` is the curve position of the first member of the
    upper group, so the gap lies between entries ``boundary_index - 1``
    and ``boundary_index``.
    """

    boundary_index: int
    gap_size: float
    groups: tuple

    def labels(self, nodes) -> np.ndarray:
        upper = self.groups[1]
        return np.array([1 if v in upper else 0 for v in nodes])


@dataclass(frozen=True)
class DistanceReport:
    """Rows of ``(u, v, d(u->v), d(v->u), max/min)``."""

    pairs: tuple


def sorted_curve(g: Graph, target: int, eps: float = DEFAULT_EPS,
                 max_iters: int = DEFAULT_MAX_ITERS, threads=None) -> SortedCurve:
    table = hitting_table(g, target, eps, max_iters, threads)
    entries = sorted(zip(table.nodes, (float(m) for m in table.mean)),
                     key=lambda e: (e[1], e[0]))
    return SortedCurve(table.target, tuple(entries))


def detect_split(curve: SortedCurve, min_group: int = 1) -> CommunitySplit:
    """Cut the curve at its largest consecutive gap.

    Only cuts that leave at least ``min_group`` entries on both sides are
    considered; among equal gaps the earliest wins.
    """
    n = len(curve.entries)
    if min_group < 1:
        raise ValueError("min_group must be >= 1")
    if n < 2 * min_group:
        raise TooFewNodes(f"{n} entries cannot hold two groups of {min_group}")
    means = curve.means
    gaps = np.diff(means)
    # gaps[k] separates entries k and k+1; boundary = k + 1
    lo, hi = min_group - 1, n - min_group - 1
    k = lo + int(np.argmax(gaps[lo:hi + 1]))
    nodes = curve.nodes
    return CommunitySplit(k + 1, float(gaps[k]),
                          (frozenset(nodes[:k + 1]), frozenset(nodes[k + 1:])))


def pairwise_distances(g: Graph, nodes, eps: float = DEFAULT_EPS,
                       max_iters: int = DEFAULT_MAX_ITERS,
                       threads=None) -> DistanceReport:
    """Directional hitting-time distances between every pair of ``nodes``.

    One solve per distinct target; pairs are reported in the order the
    nodes were given (``nodes[i]`` before ``nodes[j]`` for ``i < j``).
    """
    nodes = [int(v) for v in nodes]
    if len(set(nodes)) != len(nodes):
        raise ValueError("nodes must be distinct")

    def solve(t):
        return hitting_table(g, t, eps, max_iters)

    workers = max(1, int(threads or 1))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            tables = dict(zip(nodes, pool.map(solve, nodes)))
    else:
        tables = {t: solve(t) for t in nodes}

    rows = []
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            d_uv = tables[v].mean_of(u)
            d_vu = tables[u].mean_of(v)
            rows.append((u, v, d_uv, d_vu, max(d_uv, d_vu) / min(d_uv, d_vu)))
    return DistanceReport(tuple(rows))
