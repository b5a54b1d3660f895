"""Upper bounds on kappa for nodes on the unit circle, next to the exact value.

Every bound reports whether its validity condition holds; invalid bounds
show up as infinity with a non-positive margin.
"""

import numpy as np

from vandy.bounds_circle import all_circle_bounds
from vandy.matrix import VandermondeSpec, extremal_singular_values
from vandy.nodes import make_node_set

rng = np.random.default_rng(1)
K = 6
xi = (np.arange(K) / K + rng.uniform(0, 0.08, K)) % 1
nodes = make_node_set(np.ones(K), xi)
print(f"K = {K}, wrap separation = {nodes.stats.delta_wrap:.4f}")

for N in (8, 30, 120, 1000):
    exact = extremal_singular_values(VandermondeSpec(nodes, N)).kappa
    print(f"\nN = {N}: exact kappa = {exact:.5f}")
    for r in all_circle_bounds(N, nodes):
        shown = f"{r.value:.5f}" if r.valid else "invalid"
        print(f"  {r.name:<16} {shown:<10} margin {r.margin:.3g}")
