"""Bounds for nodes inside the unit disk.

First a near-circle pair where the general per-node bound applies, then
the equal-modulus bound across A, which is attained by uniformly spaced
nodes, and its large-N behaviour.
"""

import numpy as np

from vandy.bounds_disk import (
    disk_inputs,
    disk_sigma_bounds,
    equal_modulus_kappa_asymptote,
    equal_modulus_kappa_bound,
)
from vandy.matrix import VandermondeSpec, extremal_singular_values
from vandy.nodes import equal_modulus_nodes

pair = equal_modulus_nodes(0.999, [0.0, 0.5])
r = disk_sigma_bounds(disk_inputs(pair, 100))
s = extremal_singular_values(VandermondeSpec(pair, 100))
print("Two nodes of modulus 0.999, N = 100")
print(f"  sigma_min^2 = {s.sigma_min**2:.4f} >= {r.lower_sigma_min_sq:.4f}")
print(f"  sigma_max^2 = {s.sigma_max**2:.4f} <= {r.upper_sigma_max_sq:.4f}")
print(f"  kappa       = {s.kappa:.4f} <= {r.kappa_bound:.4f}")

K, N = 5, 100
print(f"\n{K} uniformly spaced nodes of modulus A, N = {N}")
print("  A      exact kappa   equal-modulus bound")
for A in (0.3, 0.6, 0.9, 0.99, 1.0):
    exact = extremal_singular_values(VandermondeSpec(equal_modulus_nodes(A, np.arange(K) / K), N)).kappa
    bound = equal_modulus_kappa_bound(N, A, 1 / K).value
    print(f"  {A:<6} {exact:<13.6g} {bound:.6g}")

print("\nLarge N, A = 0.8, delta = 1/5:")
for N in (10, 100, 1000, 10000):
    print(f"  N = {N:<6} bound = {equal_modulus_kappa_bound(N, 0.8, 0.2).value:.8f}")
print(f"  A**(1 - 1/delta) = {0.8 ** (1 - 5):.8f}, stated asymptote A**(1/2 - 1/delta) = "
      f"{equal_modulus_kappa_asymptote(0.8, 0.2):.8f}")
