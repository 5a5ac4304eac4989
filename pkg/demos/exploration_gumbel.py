"""Centered exploration statistic against its Gumbel limit."""
from functools import partial

import numpy as np

from monopath.asymptotics import EULER_GAMMA, exploration_drift, shifted_gumbel_cdf
from monopath.gaps import run_trials, sample_gap_trial, exploration_statistic
from monopath.sampling import RngStream
from monopath.stats import ks_critical_value, ks_distance, summarize

trial = sample_gap_trial(0.05, 0.01, RngStream(0, 0))
print("gaps", trial.gaps, " positions", trial.positions)

a = 1.0
for p in (1e-2, 1e-3, 1e-4):
    values = run_trials(partial(exploration_statistic, a, p), 10_000, master_seed=0)
    s = summarize(values)
    ks = ks_distance(values, shifted_gumbel_cdf(exploration_drift(a)))
    print(f"p={p:.0e}  mean={s.mean:.4f} (target {EULER_GAMMA + exploration_drift(a):.4f})  KS={ks:.4f}")
print("1% KS critical value at 10^4 samples:", ks_critical_value(10_000))

# empirical quantiles against Gumbel quantiles
values = np.sort(values) - exploration_drift(a)
qs = np.array([0.1, 0.5, 0.9])
print(np.round(values[(qs * len(values)).astype(int)], 3), np.round(-np.log(-np.log(qs)), 3))
