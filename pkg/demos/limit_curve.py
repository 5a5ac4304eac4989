"""The limiting phase-transition curve and its three equivalent forms."""
import math

import numpy as np

from monopath.asymptotics import critical_p, exp_integral_e1, f_of_b, limit_prob, limit_prob_tanh

print("E1(1) =", exp_integral_e1(1.0))
print("limit at x=0:", limit_prob(0.0), "  1 - f(1):", 1 - f_of_b(1.0))

for x in np.linspace(-4, 4, 9):
    print(f"x={x:+.1f}  E1 form={limit_prob(x):.10f}  tanh form={limit_prob_tanh(x):.10f}")

# the edge probability that puts a graph of size n at window coordinate x
for n in (10**3, 10**4, 10**6):
    cs = critical_p(n, 0.0)
    print(f"n={n:>8}  p={cs.p:.3e}  n*p={n * cs.p:.3f}  b={cs.b:.4f}  log n={math.log(n):.3f}")
