import math

import mpmath as mp
import numpy as np
import pytest

from vandy.errors import DomainError, NeedTwoNodes
from vandy.sieve import (
    SUITES,
    check_fejer_identity,
    check_graham_vaaler_fraction,
    check_hilbert_classic,
    check_large_sieve_circle,
    check_mv_complex,
    check_mv_real,
    check_mv_wrap,
    check_sh_equal_d,
    check_sh_general,
    fejer_deviation,
    fejer_limit,
    fejer_partial_sum,
    full_fraction_sum,
    graham_vaaler_constants,
    large_sieve_sums,
    random_check,
    run_suite,
    sh_equal_constants,
    sh_sum,
)


def cplx(rng, K):
    return rng.standard_normal(K) + 1j * rng.standard_normal(K)


def test_hilbert_trivial_cases():
    c = check_hilbert_classic([2.0])
    assert c.lhs == 0 and c.passed
    assert check_hilbert_classic([1, 1]).lhs == pytest.approx(0, abs=1e-15)


def test_hilbert_random(rng):
    for _ in range(1000):
        assert check_hilbert_classic(cplx(rng, int(rng.integers(1, 51)))).passed


def test_mv_real_symmetric_pair():
    assert check_mv_real([-0.3, 0.3], [1, 1]).lhs == pytest.approx(0, abs=1e-15)


def test_mv_real_integer_points_imply_hilbert(rng):
    x = cplx(rng, 30)
    mv = check_mv_real(np.arange(30.0), x)
    hc = check_hilbert_classic(x)
    assert mv.passed and hc.passed
    # same form up to the factor 2 pi, and the bound 1/2 sits below pi / (2 pi)
    assert mv.lhs * 2 * math.pi == pytest.approx(hc.lhs, rel=1e-12)


def test_mv_real_rejects_coincident_points():
    with pytest.raises(DomainError):
        check_mv_real([0.1, 0.1], [1, 1])


def test_mv_wrap_cases(rng):
    assert check_mv_wrap([0.0, 0.25, 0.5, 0.75], cplx(rng, 4)).passed
    assert check_mv_wrap([0.3], [1.0]).lhs == 0
    c = check_mv_wrap(np.arange(8) / 8, np.ones(8))
    assert c.passed and c.slack >= 0


def test_mv_complex_cases(rng):
    assert check_mv_complex([0.5], [0.0], [1.0]).lhs == 0
    for _ in range(200):
        K = int(rng.integers(1, 31))
        lam = rng.uniform(1e-3, 2, K)
        u = np.cumsum(rng.uniform(0.01, 1, K))
        assert check_mv_complex(lam, u, cplx(rng, K)).passed


def test_full_fraction_sum_is_real(rng):
    for _ in range(50):
        K = int(rng.integers(1, 20))
        s = full_fraction_sum(rng.uniform(0.01, 2, K), np.cumsum(rng.uniform(0.01, 1, K)), cplx(rng, K))
        assert abs(s.imag) < 1e-12 * abs(s)


def test_graham_vaaler_single_point():
    for lam, delta in [(0.01, 0.3), (1.0, 0.1), (5.0, 2.0)]:
        c = check_graham_vaaler_fraction(lam, [0.0], [1.0], delta=delta)
        assert c.lhs == pytest.approx(1 / (2 * lam))
        assert c.rhs_lower <= c.lhs <= c.rhs_upper


def test_graham_vaaler_small_lambda_limits():
    lam, delta = 1e-6, 0.25
    lo, hi = graham_vaaler_constants(lam, delta)
    assert abs((lo - 1 / (2 * lam)) + 1 / (2 * delta)) < 1e-4
    assert abs((hi - 1 / (2 * lam)) - 1 / (2 * delta)) < 1e-4


def test_graham_vaaler_scaling_equivalence(rng):
    """Scaling lam, u and delta by eps scales the form and both bounds by 1/eps."""
    K = 6
    lam = 0.4
    u = np.cumsum(rng.uniform(0.1, 1, K))
    a = cplx(rng, K)
    base = check_graham_vaaler_fraction(lam, u, a)
    for eps in (1e-3, 0.5, 7.0):
        c = check_graham_vaaler_fraction(eps * lam, eps * u, a)
        assert c.lhs == pytest.approx(base.lhs / eps, rel=1e-10)
        assert c.rhs_lower == pytest.approx(base.rhs_lower / eps, rel=1e-10)
        assert c.rhs_upper == pytest.approx(base.rhs_upper / eps, rel=1e-10)


def test_sh_kernel_identity():
    for xi in (0.1, 0.37, -0.2):
        assert complex(mp.sinh(1j * mp.pi * xi)) == pytest.approx(1j * math.sin(math.pi * xi), abs=1e-15)
    # with d -> 0 the off-diagonal kernel tends to 1/(i sin(pi (xi_k - xi_l)))
    s = sh_sum([1e-12, 1e-12], [0.0, 0.25], [0, 1])
    assert s == pytest.approx(1 / math.sinh(1e-12), rel=1e-12)


def test_sh_general_single_point_rejected():
    with pytest.raises(NeedTwoNodes):
        check_sh_general([0.5], [0.0], [1.0])


def test_sh_general_random(rng):
    for _ in range(200):
        K = int(rng.integers(2, 30))
        xi = (np.arange(K) / K + rng.uniform(0, 0.5 / K, K)) % 1
        assert check_sh_general(rng.uniform(1e-3, 2, K), xi, cplx(rng, K)).passed


def test_sh_equal_single_term():
    c = check_sh_equal_d(0.3, [0.2], [2.0], delta=0.5)
    assert c.lhs == pytest.approx(4 / math.sinh(0.3))
    assert c.passed


def test_sh_equal_sharper_lower_dominates():
    for d, delta in [(1e-3, 0.1), (0.5, 0.25), (2.0, 0.5)]:
        lo, _ = sh_equal_constants(d, delta)
        sharp, _ = sh_equal_constants(d, delta, sharper_lower=True)
        assert sharp == pytest.approx(lo * math.exp(d), rel=1e-12)
        assert sharp > lo


def test_sh_equal_small_d_limits():
    d, delta = 1e-6, 0.2
    lo, hi = sh_equal_constants(d, delta)
    assert abs((lo - 1 / d) + 1 / delta) < 1e-4
    assert abs((hi - 1 / d) - 1 / delta) < 1e-4


def test_fejer_values():
    assert fejer_limit(1.0).real == pytest.approx(0.9595174, abs=1e-7)
    assert complex(fejer_limit(1.0)) == pytest.approx(complex(1 / (2 * mp.sinh(mp.mpf(1) / 2))), rel=1e-15)
    assert fejer_deviation(1.0, 10**5) < fejer_deviation(1.0, 10**3) < fejer_deviation(1.0, 10)
    assert fejer_deviation(40.0, 10) < 1e-3
    assert fejer_deviation(0.01, 10**5) < fejer_deviation(0.01, 10**3)
    for rho in (1.0, 0.01, 0.3 + 2j, 5 - 7j):
        assert check_fejer_identity(rho, 10_000).passed


def test_fejer_pairing_matches_direct_sum():
    rho, N = 0.7 + 1.3j, 50
    q = np.arange(-N, N + 1)
    direct = np.sum((1 - np.abs(q) / N) * (-1.0) ** q / (rho + 2j * np.pi * q))
    assert fejer_partial_sum(rho, N) == pytest.approx(direct, rel=1e-13)


def test_fejer_rejects_poles():
    with pytest.raises(DomainError):
        check_fejer_identity(2j * math.pi, 10)


def test_large_sieve_unit_impulse():
    xi = [0.0, 0.2, 0.55]
    c = check_large_sieve_circle([1, 0, 0, 0], xi)
    assert c.lhs == pytest.approx(3.0)
    assert c.passed


def test_large_sieve_variants(rng):
    for _ in range(100):
        N, K = int(rng.integers(1, 100)), int(rng.integers(2, 20))
        xi = (np.arange(K) / K + rng.uniform(0, 0.5 / K, K)) % 1
        y = cplx(rng, N)
        s, m = check_large_sieve_circle(y, xi), check_large_sieve_circle(y, xi, "montgomery")
        assert s.passed and m.passed and s.rhs_upper <= m.rhs_upper
    with pytest.raises(NeedTwoNodes):
        check_large_sieve_circle([1.0], [0.1])
    with pytest.raises(DomainError):
        check_large_sieve_circle([1.0], [0.1, 0.4], "bogus")


def test_large_sieve_sums_by_polynomial_evaluation(rng):
    y = cplx(rng, 9)
    xi = np.array([0.1, 0.77])
    direct = [abs(np.polyval(y[::-1], np.exp(-2j * np.pi * x))) ** 2 for x in xi]
    np.testing.assert_allclose(large_sieve_sums(y, xi), direct, rtol=1e-12)


def test_reversed_order_summation_agrees(rng):
    """Pairwise reduction order must not move any check across its bound."""
    for _ in range(200):
        K = int(rng.integers(2, 30))
        lam = rng.uniform(1e-3, 2, K)
        u = np.cumsum(rng.uniform(0.01, 1, K))
        a = cplx(rng, K)
        fwd = check_mv_complex(lam, u, a)
        rev = check_mv_complex(lam[::-1], u[::-1], a[::-1])
        assert fwd.lhs == pytest.approx(rev.lhs, rel=1e-10, abs=1e-12)
        assert fwd.passed == rev.passed


def test_random_check_names():
    rng = np.random.default_rng(0)
    for name in SUITES["all"]:
        assert random_check(name, rng).name == name
    with pytest.raises(DomainError):
        random_check("nope", rng)


def test_run_suite():
    out = run_suite("all", 300, seed=11)
    assert [s.name for s in out] == list(SUITES["all"])
    assert all(s.violations == 0 and s.trials == 300 for s in out)
    assert out == run_suite("all", 300, seed=11)
    with pytest.raises(DomainError):
        run_suite("all", 0, seed=1)
    with pytest.raises(DomainError):
        run_suite("none", 1, seed=1)


def test_corrupted_constant_is_caught(monkeypatch):
    import vandy.sieve as sieve

    monkeypatch.setattr(sieve, "SH_CONST", 0.0)
    bad = {s.name: s.violations for s in run_suite("hilbert", 200, seed=0)}
    assert bad["sh_general"] > 0
