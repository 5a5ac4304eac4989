"""Exact finite-n computations for monotone reachability.

The number ``N_k`` of vertices in ``{1..k}`` reachable from 1 is a Markov
chain: vertex ``k`` joins the reachable set with probability
``1 - (1-p)**N_{k-1}``. Propagating its law gives ``P(1 -> n)`` in
``O(n^2)`` time; :func:`brute_force_reach_prob` enumerates whole graphs and
serves as an independent check for tiny ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .sampling import RngStream, log_failure

#: above this size the DP drops negligible tail states by default
FULL_DP_LIMIT = 20_000
DEFAULT_TRUNCATION_EPS = 1e-14

BRUTE_FORCE_MAX_N = 7


@dataclass
class StateDistribution:
    """Law of ``N_k`` restricted to a contiguous window of states.

    ``probs[j]`` is ``P(N_k = offset + j)``. Mass trimmed from the tails is
    accumulated in ``truncation_mass``.
    """

    position: int
    probs: np.ndarray
    offset: int = 1
    truncation_mass: float = 0.0

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.probs))

    def total_mass(self) -> float:
        return float(self.probs.sum()) + self.truncation_mass

    def prob(self, m: int) -> float:
        j = m - self.offset
        return float(self.probs[j]) if 0 <= j < len(self.probs) else 0.0

    def next_reach_prob(self, p: float) -> float:
        """``E(1 - (1-p)**N_k)``: probability that vertex ``k+1`` is reachable."""
        return float(np.dot(self.probs, -np.expm1(self.support * log_failure(p))))


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")


def _default_eps(n: int) -> float:
    return 0.0 if n <= FULL_DP_LIMIT else DEFAULT_TRUNCATION_EPS


def state_distribution(k: int, p: float, truncation_eps: float | None = None) -> StateDistribution:
    """Law of ``N_k`` for ``k >= 1``.

    With ``truncation_eps > 0``, states below ``truncation_eps / j`` at step
    ``j`` are trimmed from either end of the support.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_p(p)
    eps = _default_eps(k) if truncation_eps is None else truncation_eps
    if eps < 0:
        raise ValueError(f"truncation_eps must be >= 0, got {eps}")

    log_fail = log_failure(p)
    probs = np.ones(1)
    offset = 1
    dropped = 0.0
    for j in range(2, k + 1):
        m = np.arange(offset, offset + len(probs))
        stay = np.exp(m * log_fail)
        moved = probs * -np.expm1(m * log_fail)
        nxt = np.empty(len(probs) + 1)
        nxt[:-1] = probs * stay
        nxt[-1] = 0.0
        nxt[1:] += moved
        probs = nxt
        if eps > 0:
            keep = np.flatnonzero(probs >= eps / j)
            if len(keep) == 0:
                keep = np.array([int(np.argmax(probs))])
            lo, hi = keep[0], keep[-1] + 1
            if lo > 0 or hi < len(probs):
                dropped += float(probs[:lo].sum() + probs[hi:].sum())
                probs = probs[lo:hi]
                offset += int(lo)
    return StateDistribution(k, probs, offset, dropped)


def reach_prob_dp(n: int, p: float, truncation_eps: float | None = None, *, full_output: bool = False):
    """Exact ``P_p(1 -> n)`` via the reachable-count chain.

    Returns a float, or ``(prob, dist)`` with ``full_output=True`` where
    ``dist`` is the law of ``N_{n-1}`` (``None`` for ``n == 1``). The
    absolute error is at most ``dist.truncation_mass``.

    ``truncation_eps`` defaults to 0 for ``n <= 20000`` and ``1e-14`` above.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_p(p)
    if truncation_eps is not None and truncation_eps < 0:
        raise ValueError(f"truncation_eps must be >= 0, got {truncation_eps}")
    if n == 1:
        return (1.0, None) if full_output else 1.0
    eps = _default_eps(n) if truncation_eps is None else truncation_eps
    dist = state_distribution(n - 1, p, eps)
    prob = min(1.0, max(0.0, dist.next_reach_prob(p)))
    return (prob, dist) if full_output else prob


def brute_force_reach_prob(n: int, p: float) -> float:
    """``P_p(1 -> n)`` by summing over all ``2**(n(n-1)/2)`` forward graphs."""
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force enumeration is limited to n <= {BRUTE_FORCE_MAX_N}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_p(p)
    if n == 1:
        return 1.0
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    masks = np.arange(2 ** len(pairs), dtype=np.int64)
    # reach[v] is True where vertex v is reachable in that graph
    reach = [np.ones(len(masks), dtype=bool)] + [np.zeros(len(masks), dtype=bool) for _ in range(n - 1)]
    for bit, (i, j) in enumerate(pairs):
        has_edge = (masks >> bit) & 1 == 1
        reach[j] |= reach[i] & has_edge
    edge_count = np.zeros(len(masks), dtype=np.int64)
    for bit in range(len(pairs)):
        edge_count += (masks >> bit) & 1
    weights = p**edge_count * (1 - p) ** (len(pairs) - edge_count)
    return float(weights[reach[n - 1]].sum())


@dataclass(frozen=True)
class DirectedGraph:
    """Graph on vertices ``1..n`` whose edges all point from smaller to larger labels."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"edge {(i, j)} is not forward within 1..{self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        return cls(n, frozenset((int(i), int(j)) for i, j in edges))

    @classmethod
    def complete(cls, n: int) -> "DirectedGraph":
        return cls.from_edges(n, ((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    def predecessors(self) -> dict[int, list[int]]:
        preds: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for i, j in sorted(self.edges):
            preds[j].append(i)
        return preds


def sample_graph(n: int, p: float, stream: RngStream) -> DirectedGraph:
    """Barak-Erdos graph on ``1..n``: each forward pair is an edge with probability ``p``."""
    _check_p(p)
    rows, cols = np.triu_indices(n, 1)
    present = stream.uniforms(len(rows)) <= p
    return DirectedGraph.from_edges(n, zip(rows[present] + 1, cols[present] + 1))


def count_monotone_paths(g: DirectedGraph, source: int, target: int) -> int:
    """Number of increasing paths ``source -> target`` (exact Python integer)."""
    if source > target:
        raise ValueError("source must not exceed target")
    counts = {source: 1}
    preds = g.predecessors()
    for j in range(source + 1, target + 1):
        counts[j] = sum(counts[i] for i in preds[j] if i >= source)
    return counts[target]


def expected_path_count(n: int, p: float) -> float:
    """``E(# monotone paths 1 -> n) = p (1+p)**(n-2)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    return math.exp(math.log(p) + (n - 2) * math.log1p(p))
