"""Splittable random streams and the variate samplers used by the simulators.

Every Monte Carlo trial owns one :class:`RngStream`, keyed by
``(master_seed, stream_index)``. The key is fed to numpy's ``SeedSequence``
as a spawn key, so stream ``i`` is the ``i``-th child of the master seed no
matter which worker thread builds it or in what order.

Uniforms are drawn from ``(0, 1]`` so that ``log(u)`` is always finite.
Samplers come in two flavours: ``*_from_uniform`` functions are pure maps of
a given uniform (handy for checking the inversion formulas by hand), and the
stream-taking ``sample_*`` functions draw that uniform first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_UINT64_MAX = 2**64 - 1


@dataclass
class RngStream:
    """Single-owner random stream for one trial.

    Two streams with equal ``(master_seed, stream_index)`` yield identical
    sequences; different indices map to distinct ``SeedSequence`` children.
    """

    master_seed: int
    stream_index: int = 0
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name in ("master_seed", "stream_index"):
            value = getattr(self, name)
            if not 0 <= int(value) <= _UINT64_MAX:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")
        seq = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index),))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def uniforms(self, size: int) -> np.ndarray:
        """Draw ``size`` uniforms in (0, 1]."""
        # random() is a multiple of 2**-53 in [0, 1), so 1 - r is exact and > 0.
        return 1.0 - self.generator.random(size)


def uniform(stream: RngStream) -> float:
    """One uniform variate in (0, 1]."""
    return 1.0 - stream.generator.random()


def _check_prob(q: float, *, allow_one: bool) -> None:
    ok = 0.0 < q <= 1.0 if allow_one else 0.0 < q < 1.0
    if not ok:
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise ValueError(f"success probability must lie in {interval}, got {q}")


def log_failure(p: float) -> float:
    """``log(1 - p)``, accurate for tiny ``p`` where ``log(1 - p)`` rounds to 0."""
    return math.log1p(-p)


def success_probs(indices: np.ndarray, log_fail: float) -> np.ndarray:
    """``1 - (1 - p)**i`` for each index, given ``log_fail = log(1 - p)``."""
    return -np.expm1(indices * log_fail)


def geometric_from_uniform(u: float, q: float) -> int:
    """Invert the Geometric(q) law on {1, 2, ...}: ``inf{k >= 1 : u >= (1-q)**k}``."""
    _check_prob(q, allow_one=True)
    if not 0.0 < u <= 1.0:
        raise ValueError(f"uniform must lie in (0, 1], got {u}")
    if q == 1.0:
        return 1
    return max(1, math.ceil(math.log(u) / math.log1p(-q)))


def geometric_gaps(u: np.ndarray, log_fail: np.ndarray) -> np.ndarray:
    """Vectorised geometric inversion.

    ``log_fail`` holds ``log(1 - q)`` per entry (``-inf`` when ``q == 1``).
    Returns int64 values >= 1.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.ceil(np.log(u) / log_fail)
    k = np.nan_to_num(k, nan=1.0)
    return np.maximum(k, 1.0).astype(np.int64)


def sample_geometric(q: float, stream: RngStream) -> int:
    """Geometric(q) variate on {1, 2, ...} with mean ``1/q``."""
    _check_prob(q, allow_one=True)
    return geometric_from_uniform(uniform(stream), q)


def sample_exponential(stream: RngStream) -> float:
    """Exp(1) variate, ``-log U``."""
    return -math.log(uniform(stream))


def gumbel_from_uniform(u: float) -> float:
    if not 0.0 < u < 1.0:
        raise ValueError(f"uniform must lie in (0, 1), got {u}")
    return -math.log(-math.log(u))


def sample_gumbel(stream: RngStream) -> float:
    """Standard Gumbel variate, CDF ``exp(-exp(-z))``."""
    u = uniform(stream)
    while u == 1.0:  # probability 2**-53
        u = uniform(stream)
    return gumbel_from_uniform(u)


@dataclass(frozen=True)
class CoupledPair:
    """A geometric gap and an exponential built from the same uniform.

    ``y = -log U`` and ``x = inf{k >= 1 : U >= (1-q)**k}``.
    """

    x_geometric: int
    y_exponential: float
    q: float

    @property
    def discrepancy(self) -> float:
        """``|q x - y|``."""
        return abs(self.q * self.x_geometric - self.y_exponential)

    @property
    def bound(self) -> float:
        """``|q / log(1/(1-q)) - 1| * y + q``; dominates :attr:`discrepancy`."""
        rate = -math.log1p(-self.q)
        return abs(self.q / rate - 1.0) * self.y_exponential + self.q

    def satisfies_bound(self) -> bool:
        # a few ulps of slack for the rounding in log/ceil
        slack = 8 * np.finfo(float).eps * (self.q * self.x_geometric + self.y_exponential + self.q)
        return self.discrepancy <= self.bound + slack


def coupled_pair_from_uniform(u: float, q: float) -> CoupledPair:
    _check_prob(q, allow_one=False)
    return CoupledPair(geometric_from_uniform(u, q), -math.log(u), q)


def sample_coupled_pair(q: float, stream: RngStream) -> CoupledPair:
    """Draw one coupled (geometric, exponential) pair for ``0 < q < 1``."""
    _check_prob(q, allow_one=False)
    pair = coupled_pair_from_uniform(uniform(stream), q)
    assert pair.satisfies_bound(), pair
    return pair


def coupled_arrays(u: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`coupled_pair_from_uniform`; returns ``(x, y)``."""
    y = -np.log(u)
    x = geometric_gaps(u, np.log1p(-q))
    return x, y


def coupling_bound_holds(x: np.ndarray, y: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise check of ``|q x - y| <= |q/log(1/(1-q)) - 1| y + q``."""
    rate = -np.log1p(-q)
    bound = np.abs(q / rate - 1.0) * y + q
    slack = 8 * np.finfo(float).eps * (q * x + y + q)
    return np.abs(q * x - y) <= bound + slack
