"""Coupled geometric/exponential pairs and the rest term they produce."""
from functools import partial

import numpy as np

from monopath.asymptotics import rest_term_target
from monopath.gaps import run_trials, sample_rest_term
from monopath.sampling import RngStream, coupled_arrays, coupling_bound_holds, sample_coupled_pair
from monopath.stats import summarize

pair = sample_coupled_pair(0.01, RngStream(0, 0))
print(pair, " |qX - Y| =", pair.discrepancy, "<=", pair.bound)

q = np.geomspace(1e-8, 0.9, 10**6)
x, y = coupled_arrays(RngStream(0, 1).uniforms(q.size), q)
print("bound holds on all pairs:", bool(coupling_bound_holds(x, y, q).all()))

for p in (1e-2, 1e-3, 1e-4):
    s = summarize(run_trials(partial(sample_rest_term, 1.0, p), 5_000, master_seed=0))
    print(f"p={p:.0e}  mean R={s.mean:.4f}  var R={s.variance:.2e}   target={rest_term_target(1.0):.4f}")
