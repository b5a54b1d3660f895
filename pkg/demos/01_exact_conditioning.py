"""Exact condition numbers for a few node families.

Roots of unity give a perfectly conditioned square matrix. Van der Corput
nodes stay within sqrt(2K). Pulling nodes inside the disk makes things
worse quickly, because high powers of small moduli vanish.
"""

import math

import numpy as np

from vandy.matrix import VandermondeSpec, extremal_singular_values
from vandy.nodes import dft_nodes, equal_modulus_nodes, van_der_corput_nodes

print("K   DFT kappa   Van der Corput kappa   sqrt(2K)")
for K in (4, 8, 16, 32, 64):
    dft = extremal_singular_values(VandermondeSpec(dft_nodes(K), K)).kappa
    vdc = extremal_singular_values(VandermondeSpec(van_der_corput_nodes(K), K)).kappa
    print(f"{K:<3} {dft:<11.3g} {vdc:<22.4f} {math.sqrt(2 * K):.4f}")

print("\nFive uniformly spaced nodes of modulus A, N = 100 rows:")
for A in (1.0, 0.95, 0.8, 0.5, 0.2):
    s = extremal_singular_values(VandermondeSpec(equal_modulus_nodes(A, np.arange(5) / 5), 100), flag_only=True)
    note = "  (Gram numerically singular)" if s.rank_deficient else ""
    print(f"  A = {A:<5} kappa = {s.kappa:.6g}{note}")
