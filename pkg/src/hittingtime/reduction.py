"""Target-reduced transition matrix for first-passage problems.

For a target ``t`` the walk is restricted to the *source* nodes: every
node except ``t`` and the nodes adherent to ``t`` (degree one, sole
neighbour ``t``). Row ``i`` of ``B`` holds ``w_ij / W_i`` for source
neighbours ``j`` where ``W_i`` sums over *all* neighbours of ``i``, so the
mass ``X1[i] = w_it / W_i`` that would step onto the target is missing
from the row.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .errors import EmptyReduction, GraphNotConnected, TargetOutOfRange
from .graph import Graph, is_connected

__all__ = ["TargetReduction", "reduce", "adherents_of", "spectral_radius_bound",
           "transition_row"]


@dataclass(frozen=True, eq=False)
class TargetReduction:
    """Reduced first-passage system for one target.

    Attributes
    ----------
    target : int
    adherents : tuple of int
        Sorted ids of nodes whose only neighbour is the target.
    sources : tuple of int
        Sorted ids of all remaining non-target nodes; row order of ``B``.
    B : scipy.sparse.csr_matrix, shape (len(sources), len(sources))
    X1 : ndarray
        One-step hitting probabilities.
    index_of : dict
        Node id to row index.
    """

    target: int
    adherents: tuple
    sources: tuple
    B: sp.csr_matrix
    X1: np.ndarray
    index_of: dict

    @property
    def size(self) -> int:
        return len(self.sources)

    @property
    def is_empty(self) -> bool:
        return not self.sources

    def require_nonempty(self):
        if self.is_empty:
            raise EmptyReduction(self.target, self.adherents)

    def to_dict(self) -> dict:
        coo = self.B.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return {
            "target": self.target,
            "adherents": list(self.adherents),
            "sources": list(self.sources),
            "B": [[int(coo.row[k]), int(coo.col[k]), float(coo.data[k])] for k in order],
            "X1": [float(x) for x in self.X1],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def adherents_of(g: Graph, target: int) -> tuple:
    return tuple(
        v for v in range(g.node_count)
        if v != target and len(g.adjacency[v]) == 1 and g.adjacency[v][0][0] == target
    )


def transition_row(row) -> list:
    """Correctly rounded ``w / sum(w)`` for one adjacency row.

    Exact rational arithmetic keeps the result unchanged when all weights
    are rescaled by a common factor that the floats represent exactly
    (and in particular for uniform weights, whatever their value).
    """
    weights = [w for _, w in row]
    if all(w == weights[0] for w in weights):
        p = 1.0 / len(weights)
        return [p] * len(weights)
    exact = [Fraction(w) for w in weights]
    total = sum(exact)
    return [float(w / total) for w in exact]


def reduce(g: Graph, target: int, check_connected: bool = True) -> TargetReduction:
    """Build ``B``, ``X1`` and the adherent set for ``target``.

    An all-adherent graph (a star centred on ``target``) yields an empty
    reduction rather than an error; callers that need ``B`` should call
    :meth:`TargetReduction.require_nonempty`.

    Raises
    ------
    TargetOutOfRange
    GraphNotConnected
    """
    if not isinstance(target, (int, np.integer)) or not 0 <= target < g.node_count:
        raise TargetOutOfRange(f"target {target!r} not in 0..{g.node_count - 1}")
    target = int(target)
    if g.node_count < 2:
        raise TargetOutOfRange("graph needs at least two nodes")
    if check_connected and not is_connected(g):
        raise GraphNotConnected("graph is not connected")

    adherents = adherents_of(g, target)
    excluded = set(adherents)
    excluded.add(target)
    sources = tuple(v for v in range(g.node_count) if v not in excluded)
    index_of = {v: i for i, v in enumerate(sources)}

    n = len(sources)
    indptr = [0]
    indices = []
    data = []
    X1 = np.zeros(n)
    for i, s in enumerate(sources):
        row = g.adjacency[s]
        for (v, _), p in zip(row, transition_row(row)):
            if v == target:
                X1[i] = p
            else:
                # adherents only touch the target, so v is always a source
                indices.append(index_of[v])
                data.append(p)
        indptr.append(len(indices))
    B = sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(n, n),
    )
    return TargetReduction(target, adherents, sources, B, X1, index_of)


def spectral_radius_bound(r: TargetReduction, iters: int = 1000) -> float:
    """Upper estimate of the spectral radius of ``|B|``.

    Power iteration on the lazy matrix ``(I + |B|) / 2`` (aperiodic even
    when the graph is bipartite), reporting the Collatz-Wielandt bound
    ``max_i (|B| x)_i / x_i`` for the final positive iterate ``x``.
    """
    r.require_nonempty()
    if iters < 1:
        raise ValueError("iters must be >= 1")
    A = abs(r.B)
    x = np.ones(r.size)
    for _ in range(iters):
        x = 0.5 * (x + A @ x)
        x /= x.max()
    return float(np.max((A @ x) / x))
