"""Empirical CDFs, KS and total-variation distances, and summary statistics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Union

import numpy as np

#: asymptotic 1% critical value of the two-sided KS statistic, times sqrt(n)
KS_CRITICAL_1PCT = 1.63


@dataclass(frozen=True)
class EmpiricalSample:
    sorted_values: np.ndarray
    count: int

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "EmpiricalSample":
        arr = np.sort(np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float))
        if arr.size == 0:
            raise ValueError("empirical sample must not be empty")
        return cls(arr, int(arr.size))

    def cdf(self, x: float) -> float:
        return np.searchsorted(self.sorted_values, x, side="right") / self.count


def ks_critical_value(n: int) -> float:
    return KS_CRITICAL_1PCT / math.sqrt(n)


def ks_distance(sample: Union[EmpiricalSample, Iterable[float]], cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Two-sided Kolmogorov-Smirnov distance between a sample and a continuous CDF.

    ``cdf`` must accept a numpy array.
    """
    if not isinstance(sample, EmpiricalSample):
        sample = EmpiricalSample.from_values(sample)
    n = sample.count
    f = np.asarray(cdf(sample.sorted_values), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus, 0.0))


def empirical_pmf(values: Iterable[int]) -> dict[int, float]:
    counts = Counter(int(v) for v in values)
    total = sum(counts.values())
    return {k: c / total for k, c in sorted(counts.items())}


def geometric_pmf(k: int, q: float) -> float:
    """P(K = k) for K ~ Geometric(q) on {1, 2, ...}."""
    if k < 1:
        return 0.0
    return q * (1.0 - q) ** (k - 1)


PMF = Union[Mapping[int, float], Callable[[int], float]]


def tv_distance_discrete(empirical_pmf: Mapping[int, float], reference_pmf: PMF, support_cap: int) -> float:
    """Total variation between two PMFs on the non-negative integers.

    Values ``k <= support_cap`` are compared pointwise; the mass above the cap
    is folded into a single tail cell on each side. ``reference_pmf`` may be a
    mapping or a callable.
    """
    if abs(sum(empirical_pmf.values()) - 1.0) > 1e-12:
        raise ValueError("empirical pmf is not normalised")
    if any(k < 0 for k in empirical_pmf):
        raise ValueError("pmf support must be non-negative")
    if isinstance(reference_pmf, Mapping):
        if abs(sum(reference_pmf.values()) - 1.0) > 1e-12:
            raise ValueError("reference pmf is not normalised")
        ref = lambda k: reference_pmf.get(k, 0.0)  # noqa: E731
    else:
        ref = reference_pmf

    head = 0.0
    emp_in = 0.0
    ref_in = 0.0
    for k in range(support_cap + 1):
        e, r = empirical_pmf.get(k, 0.0), ref(k)
        head += abs(e - r)
        emp_in += e
        ref_in += r
    tail = abs((1.0 - emp_in) - (1.0 - ref_in))
    return min(1.0, 0.5 * (head + tail))


class Summary(NamedTuple):
    mean: float
    variance: float
    std_error: float


def summarize(values: Iterable[float], chunk: int = 4096) -> Summary:
    """Mean, unbiased variance and standard error in one pass.

    Data are shifted by their first value and consumed in fixed-size blocks
    whose (count, mean, M2) are merged with Chan's pairwise update, always in
    input order.
    """
    arr = np.asarray(values if isinstance(values, np.ndarray) else list(values), dtype=float).ravel()
    n_total = arr.size
    if n_total < 2:
        raise ValueError("need at least two values")
    shift = arr[0]
    n = 0
    mean = 0.0
    m2 = 0.0
    for lo in range(0, n_total, chunk):
        block = arr[lo:lo + chunk] - shift
        nb = block.size
        mb = float(block.mean())
        m2b = float(np.dot(block - mb, block - mb))
        delta = mb - mean
        tot = n + nb
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    var = m2 / (n - 1)
    return Summary(float(shift + mean), var, math.sqrt(var / n))
