"""The implicit bound built from the minimum-norm solution of V^T f = z^N.

Its intermediates are cheap to inspect. The bound needs a solve with the
Vandermonde matrix itself, so it inherits that matrix's conditioning,
which is visible as A shrinks.
"""

import json

import numpy as np

from vandy.bazan import bazan_asymptotic, bazan_bounds, bazan_intermediates
from vandy.matrix import VandermondeSpec, extremal_singular_values
from vandy.nodes import equal_modulus_nodes

pair = equal_modulus_nodes(0.9, [0.0, 0.5])
for N in (10, 100, 2000):
    it = bazan_intermediates(VandermondeSpec(pair, N))
    print(f"nodes +-0.9, N = {N:<5} departure from normality D^2 = {it.d_n_sq:.6f}")
print(f"large-N bracket on kappa: {bazan_asymptotic(pair)}")

xi = np.array([0.0, 0.21, 0.4, 0.63, 0.8])
print("\nFive nodes, N = 100")
for A in (0.9, 0.6, 0.4, 0.25):
    spec = VandermondeSpec(equal_modulus_nodes(A, xi), 100)
    s = extremal_singular_values(spec, flag_only=True)
    if s.rank_deficient:
        print(f"  A = {A}: Gram numerically singular, bound not computable")
        continue
    lower, upper = bazan_bounds(spec)
    print(f"  A = {A}: {lower:.4g} <= kappa = {s.kappa:.4g} <= {upper.value:.4g}")
    print("   ", json.dumps(bazan_intermediates(spec).as_dict()))
