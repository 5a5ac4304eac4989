"""Monotone path counts: exact expectation, whole graphs, and the explored vertex."""
from collections import Counter
from functools import partial
import math

from monopath.exact import count_monotone_paths, expected_path_count, sample_graph
from monopath.gaps import collect_trials, sample_path_count
from monopath.sampling import RngStream
from monopath.stats import empirical_pmf, geometric_pmf, summarize, tv_distance_discrete

g = sample_graph(12, 0.4, RngStream(0, 0))
print(len(g.edges), "edges;", count_monotone_paths(g, 1, 12), "paths from 1 to 12")

counts = [count_monotone_paths(sample_graph(50, 0.1, RngStream(0, t)), 1, 50) for t in range(2000)]
s = summarize(counts)
print(f"mean paths 1->50: {s.mean:.2f} +- {s.std_error:.2f}  exact {expected_path_count(50, 0.1):.2f}")

# number of paths into the floor(a/p)-th reachable vertex, next to Geometric(e^-a)
a, p = 1.0, 1e-3
pmf = empirical_pmf(collect_trials(partial(sample_path_count, a, p), 5_000, master_seed=0))
ref = partial(geometric_pmf, q=math.exp(-a))
for k in range(1, 6):
    print(k, round(pmf.get(k, 0.0), 4), round(ref(k), 4))
print("TV distance:", tv_distance_discrete(pmf, ref, max(pmf)))
