"""Hitting-time moments and distributions by repeated sparse products.

Everything here is a truncated power series in ``B``; no system is ever
solved and no inverse is formed. The workhorse identity is that
``(B**n @ 1)[i]`` is the probability that a walk from source ``i`` has
not reached the target after ``n`` steps, so

    E[N]            = sum_{n>=0} B**n 1
    E[N (N-1)]      = 2 sum_{n>=1} n B**n 1
    E[(N)_k]        = k! sum_{n>=k-1} C(n, k-1) B**n 1

with ``(N)_k`` the falling factorial.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrder
from .reduction import TargetReduction

__all__ = [
    "DEFAULT_EPS",
    "DEFAULT_MAX_ITERS",
    "MAX_ORDER",
    "HittingMoments",
    "HittingDistribution",
    "moments",
    "distribution",
    "generating_function_value",
    "moment",
]

DEFAULT_EPS = 1e-13
DEFAULT_MAX_ITERS = 1_000_000
MAX_ORDER = 4

# E[N^m] = sum_k S(m, k) E[(N)_k], Stirling numbers of the second kind
_STIRLING2 = {
    1: (1,),
    2: (1, 1),
    3: (1, 3, 1),
    4: (1, 7, 6, 1),
}


@dataclass(frozen=True)
class HittingMoments:
    """Mean and variance of the hitting time, one entry per source.

    ``residual`` is the infinity norm of the last weighted summand
    ``K * B**K @ 1``; ``converged`` is true iff it fell below ``eps``.
    """

    mean: np.ndarray
    variance: np.ndarray
    iterations_used: int
    residual: float
    converged: bool


@dataclass(frozen=True)
class HittingDistribution:
    """``probs[i, n-1] = P(N = n)`` for ``n = 1 .. n_max``."""

    n_max: int
    probs: np.ndarray
    tail_mass: np.ndarray

    def mean_estimate(self) -> np.ndarray:
        steps = np.arange(1, self.n_max + 1)
        return self.probs @ steps


class _MatVec:
    """``y = B @ x``, optionally split into fixed row blocks over threads.

    Each row is reduced by the same CSR kernel whatever the blocking, so
    the result does not depend on ``threads``.
    """

    def __init__(self, B, threads=None):
        self.B = B
        self.threads = max(1, int(threads or 1))
        n = B.shape[0]
        if self.threads > 1 and n >= 2 * self.threads:
            edges = np.linspace(0, n, self.threads + 1).astype(int)
            self.blocks = [(a, b, B[a:b]) for a, b in zip(edges[:-1], edges[1:])]
            self.pool = ThreadPoolExecutor(self.threads)
        else:
            self.blocks = None
            self.pool = None

    def __call__(self, x):
        if self.blocks is None:
            return self.B @ x
        out = np.empty_like(x)

        def work(block):
            a, b, rows = block
            out[a:b] = rows @ x

        list(self.pool.map(work, self.blocks))
        return out

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _check(eps, max_iters):
    if not eps > 0:
        raise ValueError("eps must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be positive")


def moments(r: TargetReduction, eps: float = DEFAULT_EPS,
            max_iters: int = DEFAULT_MAX_ITERS, threads=None) -> HittingMoments:
    """Mean and variance of the hitting time from every source.

    Single pass over ``power = B**i @ 1``: the mean accumulates ``power``
    (starting from the ``i = 0`` term), the second accumulator adds
    ``i * power``. Stops once ``||i * power||_inf < eps`` or after
    ``max_iters`` products; the latter is reported, not raised.
    """
    r.require_nonempty()
    _check(eps, max_iters)
    power = np.ones(r.size)
    mean = power.copy()
    second = np.zeros(r.size)
    error = math.inf
    i = 0
    with _MatVec(r.B, threads) as matvec:
        while i < max_iters:
            i += 1
            power = matvec(power)
            mean += power
            weighted = i * power
            second += weighted
            error = float(np.max(np.abs(weighted)))
            if error < eps:
                break
    variance = 2.0 * second + mean - mean * mean
    variance = np.where(variance < 0.0, 0.0, variance)
    return HittingMoments(mean, variance, i, error, error < eps)


def distribution(r: TargetReduction, n_max: int, threads=None) -> HittingDistribution:
    """First-passage probabilities ``P(N = n)`` for ``n = 1 .. n_max``."""
    r.require_nonempty()
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    probs = np.empty((r.size, n_max))
    x = r.X1.copy()
    probs[:, 0] = x
    with _MatVec(r.B, threads) as matvec:
        for n in range(1, n_max):
            x = matvec(x)
            probs[:, n] = x
    tail = 1.0 - probs.sum(axis=1)
    return HittingDistribution(n_max, probs, np.maximum(tail, 0.0))


def generating_function_value(r: TargetReduction, z: float, eps: float = DEFAULT_EPS,
                              max_iters: int = DEFAULT_MAX_ITERS,
                              threads=None) -> np.ndarray:
    """``sum_{n>=1} z**n P(N = n)`` per source, for ``0 < z < 1``.

    Summation stops when a term's infinity norm drops below ``eps``.
    """
    r.require_nonempty()
    _check(eps, max_iters)
    if not 0.0 < z < 1.0:
        raise ValueError("z must lie in (0, 1)")
    term = z * r.X1
    total = term.copy()
    with _MatVec(r.B, threads) as matvec:
        for _ in range(max_iters):
            if np.max(np.abs(term)) < eps and np.any(total):
                break
            term = z * matvec(term)
            total += term
    return total


def moment(r: TargetReduction, order: int, eps: float = DEFAULT_EPS,
           max_iters: int = DEFAULT_MAX_ITERS, threads=None) -> np.ndarray:
    """Raw moment ``E[N**order]`` per source, for ``order`` in 1..4.

    Factorial moments are accumulated side by side from the survival
    vectors ``B**n @ 1`` and combined with Stirling numbers. The loop ends
    when the highest-order summand (weighted by at least ``n``) falls
    below ``eps``.
    """
    if order < 1 or order > MAX_ORDER:
        raise UnsupportedOrder(f"order must be in 1..{MAX_ORDER}, got {order}")
    r.require_nonempty()
    _check(eps, max_iters)
    top = max(order, 2)
    power = np.ones(r.size)
    # acc[k-1] holds sum_n C(n, k-1) B**n 1
    acc = [power.copy()] + [np.zeros(r.size) for _ in range(order - 1)]
    n = 0
    with _MatVec(r.B, threads) as matvec:
        while n < max_iters:
            n += 1
            power = matvec(power)
            for k in range(1, order + 1):
                c = math.comb(n, k - 1)
                if c:
                    acc[k - 1] += c * power
            if n >= top - 1 and math.comb(n, top - 1) * np.max(power) < eps:
                break
    result = np.zeros(r.size)
    for k, s in enumerate(_STIRLING2[order], start=1):
        result += s * math.factorial(k) * acc[k - 1]
    return result
