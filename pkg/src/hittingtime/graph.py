"""Simple undirected weighted graphs with dense 0-based node ids.

A :class:`Graph` is immutable once built. Edges are stored once per
unordered pair as ``(u, v, w)`` with ``u < v``; per-node adjacency and a
CSR view are derived lazily and cached.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DisconnectedAfterRetries,
    DuplicateEdge,
    GraphError,
    InvalidDegree,
    MalformedLine,
    NonPositiveWeight,
    SelfLoop,
)

__all__ = [
    "Graph",
    "from_edge_list",
    "parse_edge_list",
    "read_edge_list",
    "format_edge_list",
    "write_edge_list",
    "is_connected",
    "planted_two_community",
    "planted_labels",
    "clique_plus_pendant",
]

CONNECT_RETRIES = 100
_NODES_DIRECTIVE = re.compile(r"#\s*nodes\s+(\d+)\s*$")


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with strictly positive edge weights.

    Parameters
    ----------
    node_count : int
        Number of nodes; ids are ``0 .. node_count - 1``.
    edges : tuple of (int, int, float)
        One entry per unordered pair, normalised to ``u < v`` and sorted.
    labels : tuple of str, optional
        Display names, one per node. Never used for indexing.
    meta : dict
        Provenance (e.g. the seed a generator finally used). Excluded from
        equality.
    """

    node_count: int
    edges: tuple
    labels: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.node_count < 1:
            raise GraphError("a graph needs at least one node")
        seen = set()
        for u, v, w in self.edges:
            if u == v:
                raise SelfLoop(u)
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise GraphError(f"edge ({u}, {v}) outside 0..{self.node_count - 1}")
            if not w > 0 or not math.isfinite(w):
                raise NonPositiveWeight(u, v, w)
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(*key)
            seen.add(key)
        if self.labels is not None and len(self.labels) != self.node_count:
            raise GraphError("labels must have one entry per node")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self):
        return hash((self.node_count, self.edges))

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, edge_count={len(self.edges)})"

    @cached_property
    def adjacency(self) -> tuple:
        """Per-node tuple of ``(neighbor, weight)`` sorted by neighbor id."""
        adj = [[] for _ in range(self.node_count)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(sorted(row)) for row in adj)

    @cached_property
    def csr(self) -> tuple:
        """``(indptr, indices, weights)`` arrays of the symmetric adjacency."""
        degrees = [len(row) for row in self.adjacency]
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        indices = np.fromiter(
            (v for row in self.adjacency for v, _ in row), dtype=np.int64,
            count=int(indptr[-1]),
        )
        weights = np.fromiter(
            (w for row in self.adjacency for _, w in row), dtype=np.float64,
            count=int(indptr[-1]),
        )
        return indptr, indices, weights

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> list:
        return [v for v, _ in self.adjacency[u]]

    def node_weight(self, u: int) -> float:
        """Total weight of the edges at ``u``."""
        return math.fsum(w for _, w in self.adjacency[u])

    def scaled(self, factor: float) -> "Graph":
        """Copy with every weight multiplied by ``factor``."""
        return Graph(
            self.node_count,
            tuple((u, v, w * factor) for u, v, w in self.edges),
            self.labels,
        )


def _normalise(edges, node_count=None):
    out = []
    for u, v, w in edges:
        out.append((u, v, w) if u < v else (v, u, w))
    out.sort()
    if node_count is None:
        node_count = 1 + max((max(u, v) for u, v, _ in out), default=0)
    return node_count, tuple(out)


def from_edge_list(lines: Iterable[Sequence], node_count: int | None = None,
                   labels=None) -> Graph:
    """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples.

    Missing weights default to 1.0. ``node_count`` defaults to one more
    than the largest id seen.

    Raises
    ------
    MalformedLine
        An entry is not 2 or 3 items, or an id is not a non-negative int.
    SelfLoop, DuplicateEdge, NonPositiveWeight
    """
    edges = []
    seen = set()
    for lineno, item in enumerate(lines, start=1):
        if len(item) not in (2, 3):
            raise MalformedLine(lineno, item)
        u, v = item[0], item[1]
        if (isinstance(u, bool) or isinstance(v, bool)
                or not isinstance(u, (int, np.integer))
                or not isinstance(v, (int, np.integer)) or u < 0 or v < 0):
            raise MalformedLine(lineno, item)
        u, v = int(u), int(v)
        w = float(item[2]) if len(item) == 3 else 1.0
        if u == v:
            raise SelfLoop(u)
        if not w > 0:
            raise NonPositiveWeight(u, v, w)
        if not math.isfinite(w):
            raise MalformedLine(lineno, item)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(*key)
        seen.add(key)
        edges.append((u, v, w))
    n, edges = _normalise(edges, node_count)
    return Graph(n, edges, tuple(labels) if labels is not None else None)


def parse_edge_list(text: str) -> Graph:
    """Parse the ``u v [w]`` text format; ``#`` lines and blanks are skipped.

    A ``# nodes N`` comment, as written by :func:`format_edge_list`, fixes
    the node count so that trailing isolated nodes survive a round trip.
    """
    items = []
    node_count = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NODES_DIRECTIVE.match(line)
            if m:
                node_count = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise MalformedLine(lineno, raw)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise MalformedLine(lineno, raw) from None
        if u < 0 or v < 0 or not math.isfinite(w):
            raise MalformedLine(lineno, raw)
        items.append((u, v, w))
    if node_count is not None and items:
        node_count = max(node_count, 1 + max(max(u, v) for u, v, _ in items))
    return from_edge_list(items, node_count=node_count)


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: Graph) -> str:
    """Serialise with ``repr`` floats so that parsing round-trips exactly."""
    lines = [f"# nodes {g.node_count}"]
    lines += [f"{u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g))


def is_connected(g: Graph) -> bool:
    """True iff every node is reachable from node 0 (BFS)."""
    seen = [False] * g.node_count
    seen[0] = True
    queue = deque([0])
    count = 1
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == g.node_count


def planted_labels(n_per_side: int) -> np.ndarray:
    """Community label (0 or 1) of each node of :func:`planted_two_community`."""
    return np.repeat([0, 1], n_per_side)


def _sample_planted(n_per_side, p_in, p_out, seed):
    rng = np.random.default_rng(seed)
    n = 2 * n_per_side
    iu, ju = np.triu_indices(n, k=1)
    same = (iu < n_per_side) == (ju < n_per_side)
    prob = np.where(same, p_in, p_out)
    keep = rng.random(iu.size) < prob
    return Graph(n, tuple((int(u), int(v), 1.0) for u, v in zip(iu[keep], ju[keep])))


def planted_two_community(n_per_side: int, p_in: float, p_out: float,
                          seed: int, retries: int = CONNECT_RETRIES) -> Graph:
    """Two equal communities with independent edges, unit weights.

    Nodes ``0 .. n_per_side-1`` form community 0, the rest community 1.
    Pairs inside a community are joined with probability ``p_in``, pairs
    across with ``p_out``. Disconnected samples are redrawn with the seed
    incremented; the seed finally used is in ``g.meta["seed"]``.
    """
    if n_per_side < 1:
        raise GraphError("n_per_side must be >= 1")
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise GraphError("probabilities must lie in [0, 1]")
    for attempt in range(retries):
        s = seed + attempt
        g = _sample_planted(n_per_side, p_in, p_out, s)
        if is_connected(g):
            g.meta.update(seed=s, requested_seed=seed, attempts=attempt + 1)
            return g
    raise DisconnectedAfterRetries(retries, seed + retries - 1)


def clique_plus_pendant(clique_size: int, pendant_degree: int) -> Graph:
    """Complete graph on ``0..clique_size-1`` plus one extra node.

    The extra node (id ``clique_size``) is joined to the top
    ``pendant_degree`` clique ids, so clique node ``clique_size - 1`` is
    always among its neighbours.
    """
    if not 1 <= pendant_degree <= clique_size:
        raise InvalidDegree(
            f"pendant_degree must be in 1..{clique_size}, got {pendant_degree}"
        )
    edges = [(u, v, 1.0) for u, v in itertools.combinations(range(clique_size), 2)]
    p = clique_size
    edges += [(p - k, p, 1.0) for k in range(1, pendant_degree + 1)]
    n, edges = _normalise(edges, clique_size + 1)
    return Graph(n, edges)
