"""Random checks of the Hilbert-type inequalities behind the bounds.

Each check evaluates a bilinear form by direct summation and compares it
with its bound; the minimum slack shows how close random instances get.
"""

from vandy.sieve import check_fejer_identity, fejer_deviation, run_suite

for s in run_suite("all", trials=500, seed=0):
    print(f"{s.name:<24} violations {s.violations}  min slack {s.min_slack:.3g}")

print("\nFejer means of 1/(rho + 2 pi i q) approach 1/(2 sh(rho/2)) at rate 1/N:")
for N in (10, 100, 1000, 10000):
    print(f"  rho = 1, N = {N:<6} N * deviation = {N * fejer_deviation(1.0, N):.6f}")
print(f"  check at N = 10^4: {check_fejer_identity(0.01, 10_000).passed}")
