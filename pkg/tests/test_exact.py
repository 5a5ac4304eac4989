import math

import numpy as np
import pytest

from monopath.asymptotics import critical_p
from monopath.exact import (
    DirectedGraph,
    brute_force_reach_prob,
    count_monotone_paths,
    expected_path_count,
    reach_prob_dp,
    sample_graph,
    state_distribution,
)
from monopath.sampling import RngStream
from monopath.stats import summarize

from oracles import dfs_reach_enumeration, weighted_path_count_enumeration

P_GRID = [0.1, 0.3, 0.5, 0.7, 0.9]

# frozen from dfs_reach_enumeration(4, 0.5); also 1 - E[2**-N_3] by hand
REACH_N4_HALF = 0.734375


def test_dp_small_cases():
    assert reach_prob_dp(1, 0.37) == 1.0
    assert reach_prob_dp(2, 0.37) == pytest.approx(0.37, abs=1e-15)
    assert reach_prob_dp(3, 0.5) == pytest.approx(0.625, abs=1e-15)
    assert reach_prob_dp(3, 0.5) == pytest.approx(1 - 0.5 * (1 - 0.25), abs=1e-15)


@pytest.mark.parametrize("p", P_GRID)
@pytest.mark.parametrize("n", range(2, 7))
def test_dp_matches_brute_force(n, p):
    assert abs(reach_prob_dp(n, p) - brute_force_reach_prob(n, p)) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_brute_force_matches_dfs_oracle(n):
    for p in (0.2, 0.5):
        assert brute_force_reach_prob(n, p) == pytest.approx(dfs_reach_enumeration(n, p), abs=1e-14)


def test_brute_force_frozen_values():
    assert brute_force_reach_prob(2, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert brute_force_reach_prob(3, 0.5) == pytest.approx(0.625, abs=1e-15)
    assert brute_force_reach_prob(4, 0.5) == pytest.approx(REACH_N4_HALF, abs=1e-15)


def test_brute_force_n7_runs():
    assert abs(brute_force_reach_prob(7, 0.3) - reach_prob_dp(7, 0.3)) < 1e-12


def test_brute_force_rejects_large_n():
    with pytest.raises(ValueError):
        brute_force_reach_prob(8, 0.5)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.2])
def test_dp_rejects_bad_p(p):
    with pytest.raises(ValueError):
        reach_prob_dp(5, p)


def test_dp_rejects_negative_eps():
    with pytest.raises(ValueError):
        reach_prob_dp(5, 0.5, -1e-3)


def test_dp_monotone_in_p():
    ps = np.linspace(0.01, 0.99, 25)
    for n in (5, 30, 200):
        vals = [reach_prob_dp(n, p) for p in ps]
        # nondecreasing up to the DP's rounding level
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_state_distribution_normalised():
    for k in (1, 2, 10, 300):
        dist = state_distribution(k, 0.02)
        assert abs(dist.total_mass() - 1.0) <= 1e-12
    assert state_distribution(1, 0.4).prob(1) == 1.0


def test_truncation_mass_accounting():
    n, p = 3000, critical_p(3000, 0.0).p
    full = reach_prob_dp(n, p, 0.0)
    trunc, dist = reach_prob_dp(n, p, 1e-10, full_output=True)
    assert abs(dist.total_mass() - 1.0) <= 1e-12
    assert len(dist.probs) < n - 1
    assert abs(trunc - full) <= dist.truncation_mass + 1e-13


def test_count_paths_small_graphs():
    g = DirectedGraph.complete(4)
    assert count_monotone_paths(g, 1, 4) == 4
    assert count_monotone_paths(g, 2, 2) == 1
    empty = DirectedGraph.from_edges(5, [])
    assert count_monotone_paths(empty, 1, 5) == 0
    assert count_monotone_paths(empty, 3, 3) == 1


def test_count_paths_big_integers():
    # the complete forward graph has 2**(n-2) paths from 1 to n
    g = DirectedGraph.complete(80)
    assert count_monotone_paths(g, 1, 80) == 2**78


def test_graph_rejects_backward_edges():
    with pytest.raises(ValueError):
        DirectedGraph.from_edges(3, [(2, 1)])


def test_expected_path_count_values():
    assert expected_path_count(2, 0.3) == pytest.approx(0.3, rel=1e-14)
    assert expected_path_count(4, 0.5) == pytest.approx(weighted_path_count_enumeration(4, 0.5), rel=1e-14)
    assert expected_path_count(4, 0.5) == pytest.approx(1.125, rel=1e-14)
    with pytest.raises(ValueError):
        expected_path_count(1, 0.5)


def test_expected_path_count_tends_to_exp_x():
    # p(1+p)^(n-2) ~ b e^{-n p^2/2}, and b = (1 + (x - log log n)/log n) e^x
    for x in (0.0, 1.0):
        errs = []
        for n in (10**3, 10**4, 10**5, 10**6):
            cs = critical_p(n, x)
            value = expected_path_count(n, cs.p)
            assert value == pytest.approx(cs.b * math.exp(-n * cs.p**2 / 2), rel=0.02)
            errs.append(abs(value - math.exp(x)))
        assert all(b < a for a, b in zip(errs, errs[1:]))


def test_mean_path_count_monte_carlo():
    n, p, trials = 50, 0.1, 10_000
    counts = [count_monotone_paths(sample_graph(n, p, RngStream(11, t)), 1, n) for t in range(trials)]
    s = summarize(counts)
    assert abs(s.mean - expected_path_count(n, p)) < 3 * s.std_error
