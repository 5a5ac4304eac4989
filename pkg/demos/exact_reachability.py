"""Exact reachability probabilities for small and moderate graphs."""
import numpy as np

from monopath.exact import brute_force_reach_prob, reach_prob_dp, state_distribution

# tiny graphs: the chain DP against a full enumeration of edge sets
for n in range(2, 7):
    dp = reach_prob_dp(n, 0.3)
    bf = brute_force_reach_prob(n, 0.3)
    print(f"n={n}  dp={dp:.15f}  brute={bf:.15f}")

# the number of reachable vertices below k is a Markov chain; look at its law
dist = state_distribution(200, 0.02)
print("support", dist.support[0], "..", dist.support[-1], " mass", dist.total_mass())
print("mode", dist.support[np.argmax(dist.probs)])

# probability as a function of p at fixed n
ps = np.linspace(0.005, 0.05, 10)
print(np.round([reach_prob_dp(500, p) for p in ps], 4))

# larger n: truncating negligible mass keeps the work roughly linear
prob, dist = reach_prob_dp(20_000, 4e-4, 1e-12, full_output=True)
print(f"n=20000  prob={prob:.10f}  dropped mass={dist.truncation_mass:.1e}  states kept={len(dist.probs)}")
