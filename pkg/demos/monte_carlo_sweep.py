"""Monte Carlo reachability across the critical window.

Each trial uses its own stream (seed, trial index), so results are the same
for any number of worker threads. The same seed is reused at every n, which
makes the comparison between sizes less noisy.
"""
from functools import partial

from monopath.asymptotics import critical_p, limit_prob
from monopath.exact import reach_prob_dp
from monopath.gaps import estimate, simulate_reach

n, p = 500, 0.012
est = estimate(partial(simulate_reach, n, p), 20_000, master_seed=0, workers=4)
print(f"n={n} p={p}: mc={est.mean:.4f} +- {est.std_error:.4f}   exact={reach_prob_dp(n, p):.4f}")

for x in (-2.0, 0.0, 2.0):
    row = []
    for n in (10**3, 10**4, 10**5):
        p = critical_p(n, x).p
        row.append(estimate(partial(simulate_reach, n, p), 5_000, master_seed=0).mean)
    print(f"x={x:+.0f}  " + "  ".join(f"{v:.3f}" for v in row) + f"   limit={limit_prob(x):.3f}")

# the gap is not a sampling artefact: at finite n the window coordinate is
# effectively shifted, and the shift shrinks only like 1/log n
