"""Closed-form limit laws for the critical window and the maps between its coordinates.

With ``p = (log n - log log n + x) / n``,

    P(1 -> n)  ->  1 - exp(e**-x - x) * E1(e**-x)
                =  1/2 + 1/2 * E tanh((x - G) / 2),      G standard Gumbel
                =  1 - f(e**x),   f(b) = (1/b) e**(1/b) E1(1/b).

The first and third forms are evaluated through the scaled exponential
integral ``z e**z E1(z)``, which stays finite for every ``z > 0``. The tanh
form is integrated numerically and serves as an independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

EULER_GAMMA = float(np.euler_gamma)

_E1_SPLIT = 1.0
_E1_UNDERFLOW = 700.0
_X_CLAMP = 700.0


class ConvergenceError(ArithmeticError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


def _e1_series(z: float) -> float:
    # E1(z) = -gamma - log z - sum_{k>=1} (-z)**k / (k k!)
    total = 0.0
    term = 1.0
    k = 1
    while True:
        term *= -z / k
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-17 * abs(total):
            break
        k += 1
        if k > 200:
            raise ConvergenceError("E1 series did not converge", abs(contrib))
    return -EULER_GAMMA - math.log(z) - total


def _e1_scaled_cf(z: float) -> float:
    """``e**z E1(z)`` by the modified Lentz continued fraction, valid for z >= 1."""
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ConvergenceError("E1 continued fraction did not converge", abs(delta - 1.0))


def scaled_e1(z: float) -> float:
    """``z * e**z * E1(z)`` for ``z > 0``; tends to 1 as ``z -> inf``."""
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    if z < _E1_SPLIT:
        return z * math.exp(z) * _e1_series(z)
    if math.isinf(z):
        return 1.0
    return z * _e1_scaled_cf(z)


def exp_integral_e1(z: float) -> float:
    """Exponential integral ``E1(z) = int_z^inf e**-t / t dt`` for real ``z > 0``.

    Power series below ``z = 1``, continued fraction above; returns 0 past
    ``z = 700`` where the value underflows.
    """
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    if z < _E1_SPLIT:
        return _e1_series(z)
    if z > _E1_UNDERFLOW:
        return 0.0
    return math.exp(-z) * _e1_scaled_cf(z)


def f_of_b(b: float) -> float:
    """``f(b) = (1/b) e**(1/b) E1(1/b)``; decreases from 1 (b -> 0) to 0 (b -> inf)."""
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    return scaled_e1(1.0 / b)


def limit_prob(x: float) -> float:
    """Limit of ``P(1 -> n)`` at window coordinate ``x``."""
    if x >= _X_CLAMP:
        return 1.0
    if x <= -_X_CLAMP:
        return 0.0
    return 1.0 - scaled_e1(math.exp(-x))


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _gl(fn, lo: float, hi: float, order: int) -> float:
    nodes, weights = _gauss_legendre(order)
    half = 0.5 * (hi - lo)
    return half * float(np.dot(weights, fn(lo + half * (nodes + 1.0))))


def adaptive_quad(fn, lo: float, hi: float, tol: float, breakpoints=(), max_depth: int = 60) -> float:
    """Adaptive Gauss-Legendre (10 vs 20 nodes) with bisection.

    ``fn`` is evaluated on numpy arrays. Each accepted piece carries an error
    estimate below its share of ``tol``; raises :class:`ConvergenceError`
    with the accumulated estimate if some piece cannot be resolved.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    cuts = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
    width = hi - lo
    stack = [(a, b, 0) for a, b in zip(cuts[:-1], cuts[1:])]
    total = 0.0
    err_total = 0.0
    failed = False
    while stack:
        a, b, depth = stack.pop()
        coarse = _gl(fn, a, b, 10)
        fine = _gl(fn, a, b, 20)
        err = abs(fine - coarse)
        # the 20-node value is far better than the 10-node error estimate
        if err <= 0.5 * tol * (b - a) / width:
            total += fine
            err_total += err
        elif depth >= max_depth:
            total += fine
            err_total += err
            failed = True
        else:
            mid = 0.5 * (a + b)
            stack.append((a, mid, depth + 1))
            stack.append((mid, b, depth + 1))
    if failed:
        raise ConvergenceError(f"quadrature error estimate {err_total:.3g} exceeds tol {tol:.3g}", err_total)
    return total


def limit_prob_tanh(x: float, quad_tol: float = 1e-10) -> float:
    """Limit probability as ``1/2 + 1/2 E tanh((x - G)/2)``, by quadrature.

    With ``t = e**-G ~ Exp(1)`` the expectation is
    ``int_0^inf tanh((x + log t)/2) e**-t dt``; the range is cut at ``T``
    with ``e**-T <= quad_tol`` (the integrand is bounded by ``e**-t``).
    """
    if not quad_tol > 0:
        raise ValueError(f"quad_tol must be positive, got {quad_tol}")
    if x >= _X_CLAMP:
        return 1.0
    if x <= -_X_CLAMP:
        return 0.0
    # the probability is half the expectation, so each half of the budget
    # (truncation and quadrature) may use quad_tol on the expectation
    upper = math.log(1.0 / quad_tol)

    def integrand(t: np.ndarray) -> np.ndarray:
        return np.tanh(0.5 * (x + np.log(t))) * np.exp(-t)

    # the sign change of tanh sits at t = e**-x
    value = adaptive_quad(integrand, 0.0, upper, quad_tol, breakpoints=(math.exp(-x),))
    return 0.5 + 0.5 * value


@dataclass(frozen=True)
class CriticalSequence:
    n: int
    x: float
    p: float
    b: float


def critical_p(n: int, x: float) -> CriticalSequence:
    """``p_{n,x} = (log n - log log n + x) / n`` and its matching ``b = p e**(n p)``."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    log_n = math.log(n)
    p = (log_n - math.log(log_n) + x) / n
    if not 0.0 < p < 1.0:
        raise ValueError(f"p_(n,x) = {p} is outside (0, 1) for n={n}, x={x}")
    b = math.exp(math.log(p) + n * p)
    return CriticalSequence(n=n, x=x, p=p, b=b)


def lambert_w(z: float, tol: float = 1e-15, max_iter: int = 50) -> float:
    """Principal branch ``W(z)`` for real ``z >= -1/e``, by Halley iteration."""
    if z < -1.0 / math.e:
        raise ValueError(f"W is not real for z < -1/e, got {z}")
    if z == 0.0:
        return 0.0
    if z > math.e:
        l1 = math.log(z)
        w = l1 - math.log(l1)
    elif z > -0.25:
        w = math.log1p(z)
    else:
        # branch-point expansion
        w = math.sqrt(2.0 * (math.e * z + 1.0)) - 1.0
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        if w == -1.0:
            return w
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = f / denom
        w -= step
        if abs(step) <= tol * (1.0 + abs(w)):
            return w
    raise ConvergenceError(f"Halley iteration for W({z}) did not converge", abs(step))


def solve_p_from_b(n: int, b: float) -> float:
    """Solve ``n = log(b/p) / p`` for ``p``: ``p = W(n b) / n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    p = lambert_w(n * b) / n
    if not 0.0 < p < 1.0:
        raise ValueError(f"solution p = {p} lies outside (0, 1)")
    residual = abs(n - math.log(b / p) / p)
    if residual > 1e-9 * n:
        raise ConvergenceError(f"calibration residual {residual:.3g} too large", residual)
    return p


def gumbel_cdf(z):
    """Standard Gumbel CDF ``exp(-exp(-z))``; accepts scalars or arrays."""
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-np.asarray(z, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out


def gumbel_pdf(z):
    with np.errstate(over="ignore"):
        z = np.asarray(z, dtype=float)
        out = np.exp(-(z + np.exp(-z)))
    return float(out) if np.ndim(out) == 0 else out


def shifted_gumbel_cdf(shift: float):
    """CDF of ``G + shift``."""
    return lambda z: gumbel_cdf(np.asarray(z) - shift)


def exploration_drift(a: float) -> float:
    """``log(e**a - 1)``, the location of the limiting exploration statistic."""
    return math.log(math.expm1(a))


def rest_term_target(a: float) -> float:
    """``log(e**a - 1) - log a``, the limiting mean of the rest term."""
    return math.log(math.expm1(a) / a)
