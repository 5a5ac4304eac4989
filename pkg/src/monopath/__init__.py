"""Monotone-path reachability in vertex-ordered Erdos-Renyi (Barak-Erdos) graphs.

Exact finite-n probabilities, gap-process Monte Carlo and the closed-form
limit laws of the critical window ``p = (log n - log log n + x) / n``.
"""
from .asymptotics import (
    ConvergenceError,
    CriticalSequence,
    critical_p,
    exp_integral_e1,
    f_of_b,
    gumbel_cdf,
    lambert_w,
    limit_prob,
    limit_prob_tanh,
    solve_p_from_b,
)
from .exact import (
    DirectedGraph,
    StateDistribution,
    brute_force_reach_prob,
    count_monotone_paths,
    expected_path_count,
    reach_prob_dp,
    sample_graph,
    state_distribution,
)
from .gaps import (
    EstimateWithError,
    GapTrial,
    estimate,
    exploration_statistic,
    harmonic_exponential_statistic,
    joint_exploration_increment,
    collect_trials,
    run_trials,
    sample_gap_trial,
    sample_path_count,
    sample_rest_term,
    simulate_reach,
)
from .sampling import (
    CoupledPair,
    RngStream,
    sample_coupled_pair,
    sample_exponential,
    sample_geometric,
    sample_gumbel,
    uniform,
)
from .stats import EmpiricalSample, ks_distance, summarize, tv_distance_discrete

__version__ = "0.1.0"
