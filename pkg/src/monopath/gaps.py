"""Monte Carlo on the gap representation of the reachable set.

Vertex 1 is reachable and sits at position 1. Once ``i`` vertices are
reachable, the distance to the next reachable vertex is an independent
Geometric(``1 - (1-p)**i``) variable, so the whole reachable set can be
simulated with one uniform per reachable vertex instead of one per vertex.

All kernels take an :class:`~monopath.sampling.RngStream` and are pure given
it. :func:`run_trials` and :func:`estimate` fan kernels out over trial
indices (``stream_index = trial number``) and return results in trial order,
so the output does not depend on the number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .sampling import RngStream, coupled_arrays, log_failure, success_probs
from .stats import summarize

EULER_GAMMA = float(np.euler_gamma)


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")


def budget_count(a: float, p: float) -> int:
    """``floor(a / p)``, guarded against ``a/p`` landing one ulp under an integer."""
    _check_p(p)
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    ratio = a / p
    m = math.floor(ratio)
    if math.isclose(ratio, m + 1, rel_tol=4 * np.finfo(float).eps, abs_tol=0.0):
        m += 1
    if m < 1:
        raise ValueError(f"floor(a/p) must be >= 1 (a={a}, p={p})")
    return m


@lru_cache(maxsize=64)
def _inverse_rates(p: float, start: int, count: int) -> np.ndarray:
    # 1 / -log(1 - q_i) = 1 / (-i log(1 - p))
    idx = np.arange(start, start + count, dtype=float)
    inv = 1.0 / (idx * -log_failure(p))
    inv.flags.writeable = False
    return inv


def draw_gaps(count: int, p: float, stream: RngStream, start: int = 1) -> np.ndarray:
    """Gaps ``X_start, ..., X_{start+count-1}``; ``X_i ~ Geometric(1 - (1-p)**i)``.

    Inversion through an exponential: with ``E = -log U``,
    ``X_i = max(1, ceil(E / -log(1 - q_i)))``. Returned as float64 holding
    exact integers, which keeps the prefix sums cheap.
    """
    gaps = stream.generator.standard_exponential(count)
    gaps *= _inverse_rates(p, start, count)
    np.ceil(gaps, out=gaps)
    np.maximum(gaps, 1.0, out=gaps)
    return gaps


@dataclass
class GapTrial:
    """One realisation of the exploration process up to ``floor(a/p)`` gaps.

    ``positions[0] == 1`` is vertex 1 and ``positions[m] = 1 + sum(gaps[:m])``
    is the ``(m+1)``-th reachable vertex.
    """

    p: float
    a: float
    gaps: np.ndarray
    positions: np.ndarray
    exploration_stat: float
    path_count: Optional[int] = None
    rest_term: Optional[float] = None


def _chunk_sizes(n: int, p: float) -> tuple[int, int]:
    # rough number of gaps needed to pass n, from the Gumbel asymptotics;
    # results do not depend on these sizes, only the amount of overdraw does
    a_est = float(np.logaddexp(0.0, n * p + math.log(p) - EULER_GAMMA))
    return int(min(n - 1, a_est / p + 32)), int(max(32, 0.5 * a_est / p))


def simulate_reach(n: int, p: float, stream: RngStream) -> bool:
    """One draw of the event ``{1 -> n}``: does a reachable vertex land on ``n``?"""
    _check_p(p)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    target = n - 1  # distance from vertex 1
    if target == 0:
        return True
    covered = 0.0
    start = 1
    chunk, step = _chunk_sizes(n, p)
    # every gap is >= 1, so at most `target` gaps are ever needed
    while True:
        size = min(chunk, target - start + 1)
        ends = covered + np.cumsum(draw_gaps(size, p, stream, start))
        j = int(np.searchsorted(ends, target))
        if j < size:
            return bool(ends[j] == target)
        covered = float(ends[-1])
        start += size
        chunk = step


def sample_gap_trial(a: float, p: float, stream: RngStream) -> GapTrial:
    """Draw ``floor(a/p)`` gaps and package positions and the exploration statistic."""
    m = budget_count(a, p)
    gaps = draw_gaps(m, p, stream)
    gaps = gaps.astype(np.int64)
    positions = np.concatenate(([1], 1 + np.cumsum(gaps)))
    stat = p * float(gaps.sum()) - math.log(1 / p)
    return GapTrial(p=p, a=a, gaps=gaps, positions=positions, exploration_stat=stat)


def exploration_statistic(a: float, p: float, stream: RngStream) -> float:
    """``p * (X_1 + ... + X_{floor(a/p)}) - log(1/p)``.

    Converges in law to ``G + log(e**a - 1)`` with ``G`` standard Gumbel.
    """
    m = budget_count(a, p)
    return p * float(draw_gaps(m, p, stream).sum()) - math.log(1 / p)


def joint_exploration_increment(a1: float, a2: float, p: float, stream: RngStream) -> float:
    """``statistic(a2) - statistic(a1)`` computed on one shared gap sequence.

    Tends to ``log((e**a2 - 1) / (e**a1 - 1))`` in probability.
    """
    if a1 > a2:
        raise ValueError(f"need a1 <= a2, got a1={a1}, a2={a2}")
    m1 = budget_count(a1, p)
    if a1 == a2:
        return 0.0
    m2 = budget_count(a2, p)
    gaps = draw_gaps(m2, p, stream)
    return p * float(gaps[m1:].sum())


def rest_term_from_pairs(x: np.ndarray, y: np.ndarray, p: float) -> float:
    """Rest term for coupled gaps ``x`` and exponentials ``y`` (index ``i = 1, 2, ...``).

    ``sum p (1/q_i - 1/(i p)) y_i + sum (p/q_i) (q_i x_i - y_i)`` with
    ``q_i = 1 - (1-p)**i``.
    """
    idx = np.arange(1, len(x) + 1, dtype=float)
    q = success_probs(idx, log_failure(p))
    drift = p * (1.0 / q - 1.0 / (idx * p)) * y
    coupling = (p / q) * (q * x - y)
    return float(drift.sum() + coupling.sum())


def sample_rest_term(a: float, p: float, stream: RngStream) -> float:
    """One draw of the rest term ``R_p(a)`` from coupled (geometric, exponential) pairs."""
    m = budget_count(a, p)
    idx = np.arange(1, m + 1, dtype=float)
    q = success_probs(idx, log_failure(p))
    x, y = coupled_arrays(stream.uniforms(m), q)
    return rest_term_from_pairs(x, y, p)


def harmonic_exponential_statistic(a: float, p: float, stream: RngStream) -> float:
    """``sum_{i <= floor(a/p)} Y_i / i - log(1/p)`` with fresh Exp(1) variables."""
    m = budget_count(a, p)
    y = -np.log(stream.uniforms(m))
    return float((y / np.arange(1, m + 1)).sum()) - math.log(1 / p)


def _positive_binomial(r: np.ndarray, p: float, u: np.ndarray) -> np.ndarray:
    """Invert ``Binomial(r, p)`` conditioned on being >= 1, elementwise."""
    log_fail = log_failure(p)
    q = -np.expm1(r * log_fail)
    pmf = r * p * np.exp((r - 1) * log_fail) / q
    cdf = pmf.copy()
    k = np.ones(len(r), dtype=np.int64)
    pending = (u > cdf) & (k < r)
    odds = p / (1 - p)
    while pending.any():
        kk = k[pending]
        rr = r[pending]
        pmf[pending] *= (rr - kk) / (kk + 1) * odds
        cdf[pending] += pmf[pending]
        k[pending] += 1
        # rounding can leave cdf a hair below u at the top of the support
        pending &= (u > cdf) & (k < r)
    return k


def sample_path_count(a: float, p: float, stream: RngStream) -> int:
    """Number of monotone paths from 1 to the ``floor(a/p)``-th reachable vertex.

    Only reachable vertices are generated: each new one has a
    Binomial(#reachable, p) number of in-edges from the reachable set,
    conditioned to be positive, landing on a uniform subset. Unreachable
    vertices carry no paths from 1 and are skipped.
    """
    m = budget_count(a, p)
    if m == 1:
        return 1
    rng = stream.generator
    sizes = np.arange(1, m)  # reachable-set size before each new vertex
    in_degree = _positive_binomial(sizes.astype(float), p, 1.0 - rng.random(m - 1))
    picks = np.floor(rng.random(int(in_degree.sum())) * np.repeat(sizes, in_degree)).astype(np.int64)

    counts = [1]
    pos = 0
    for size, k in zip(sizes.tolist(), in_degree.tolist()):
        chosen = picks[pos:pos + k].tolist()
        pos += k
        if k == 1:
            counts.append(counts[chosen[0]])
            continue
        distinct = set(chosen)
        while len(distinct) < k:
            distinct.add(int(rng.integers(size)))
        counts.append(sum(counts[j] for j in distinct))
    total = counts[-1]
    assert total >= 1
    return total


def _run_block(kernel: Callable[[RngStream], float], master_seed: int, lo: int, hi: int) -> list:
    return [kernel(RngStream(master_seed, i)) for i in range(lo, hi)]


def collect_trials(
    kernel: Callable[[RngStream], object],
    trials: int,
    master_seed: int = 0,
    workers: int = 1,
) -> list:
    """Evaluate ``kernel`` on streams ``0..trials-1``; results in trial order."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers <= 1:
        return _run_block(kernel, master_seed, 0, trials)
    bounds = np.linspace(0, trials, 4 * workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = pool.map(lambda lh: _run_block(kernel, master_seed, *lh), zip(bounds[:-1], bounds[1:]))
        return [v for block in blocks for v in block]


def run_trials(
    kernel: Callable[[RngStream], float],
    trials: int,
    master_seed: int = 0,
    workers: int = 1,
) -> np.ndarray:
    """:func:`collect_trials` as a float array."""
    return np.asarray(collect_trials(kernel, trials, master_seed, workers), dtype=float)


@dataclass(frozen=True)
class EstimateWithError:
    mean: float
    std_error: float
    trials: int
    master_seed: int


def estimate(
    kernel: Callable[[RngStream], float],
    trials: int,
    master_seed: int = 0,
    workers: int = 1,
) -> EstimateWithError:
    """Monte Carlo mean and standard error of ``kernel`` over ``trials`` streams."""
    if trials < 2:
        raise ValueError(f"trials must be >= 2, got {trials}")
    values = run_trials(kernel, trials, master_seed, workers)
    s = summarize(values)
    return EstimateWithError(s.mean, s.std_error, trials, master_seed)
