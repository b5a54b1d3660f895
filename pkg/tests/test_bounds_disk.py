import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandy.bounds_circle import improved_circle_bound_v2
from vandy.bounds_disk import (
    MV_CONST,
    DiskBoundInputs,
    disk_inputs,
    disk_kappa_bound,
    disk_kappa_report,
    disk_sieve_factor,
    disk_sigma_bounds,
    equal_modulus_kappa_asymptote,
    equal_modulus_kappa_bound,
    equal_modulus_sigma_bounds,
    phi,
    script_L,
    script_U,
    validity_thresholds,
)
from vandy.errors import DomainError
from vandy.matrix import VandermondeSpec, extremal_singular_values, vandermonde
from vandy.nodes import equal_modulus_nodes, make_node_set

from conftest import spread_frequencies

mp.mp.dps = 50


def mp_phi(N, a):
    a = mp.mpf(a)
    return N if a == 1 else (a ** (2 * N) - 1) / (2 * mp.log(a))


def mp_equal_modulus(N, A, delta):
    A, q = mp.mpf(A), 1 / mp.mpf(delta)
    lower = (1 - A ** (2 * (N + mp.mpf(1) / 2 - q))) / (delta * (A ** (-2 * q) - 1) * A * A)
    upper = A ** (-2 * q) * (1 - A ** (2 * (N - 1 + q))) / (delta * (A ** (-2 * q) - 1))
    return lower, upper


@pytest.fixture
def near_circle_pair():
    return disk_inputs(equal_modulus_nodes(0.999, [0.0, 0.5]), 100)


def test_phi_values():
    assert phi(2, 0.5) == pytest.approx(float(mp_phi(2, "0.5")), rel=1e-14)
    assert phi(2, 0.5) == pytest.approx(0.9375 / (2 * math.log(2)), rel=1e-15)  # 0.676263...
    assert phi(37, 1.0) == 37
    assert abs(phi(100, 1 - 1e-9) - 100) < 1e-6 * 100


def test_phi_vectorized_and_domain():
    np.testing.assert_allclose(phi(5, np.array([0.5, 1.0])), [float(mp_phi(5, "0.5")), 5.0], rtol=1e-14)
    with pytest.raises(DomainError):
        phi(5, 1.5)
    with pytest.raises(DomainError):
        phi(5, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 500), st.floats(1e-3, 1.0))
def test_phi_matches_high_precision(N, a):
    assert phi(N, a) == pytest.approx(float(mp_phi(N, a)), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 500), st.floats(1e-3, 1.0))
def test_phi_non_decreasing_in_n(N, a):
    assert phi(N + 1, a) >= phi(N, a)


def test_near_circle_worked_example(near_circle_pair):
    inp = near_circle_pair
    assert script_L(inp) == pytest.approx(42.0452, abs=1e-4)
    assert script_U(inp) == pytest.approx(139.397, abs=1e-3)
    r = disk_sigma_bounds(inp)
    assert r.valid
    np.testing.assert_allclose(r.per_node_margins, 0.23173, atol=1e-5)
    assert r.kappa_bound == pytest.approx(1.81575, abs=1e-5)
    s = extremal_singular_values(VandermondeSpec(equal_modulus_nodes(0.999, [0.0, 0.5]), 100))
    assert r.lower_sigma_min_sq <= s.sigma_min**2
    assert s.sigma_max**2 <= r.upper_sigma_max_sq
    assert s.kappa <= r.kappa_bound


def test_near_circle_matches_high_precision(near_circle_pair):
    a, N, d = mp.mpf("0.999"), 100, mp.mpf("0.5")
    c = 84 / mp.pi
    L = (mp_phi(N, a) - c / (2 * d) * (1 + a ** (2 * N))) / a
    assert script_L(near_circle_pair) == pytest.approx(float(L), rel=1e-13)


def test_unit_circle_reduction(rng):
    K, N = 5, 400
    ns = make_node_set(np.ones(K), spread_frequencies(rng, K))
    inp = disk_inputs(ns, N)
    dk = ns.stats.delta_wrap_per_node
    c = 2 * MV_CONST
    assert script_L(inp) == pytest.approx(np.min(N - c / dk), rel=1e-14)
    assert script_U(inp) == pytest.approx(np.max(N + c / dk), rel=1e-14)
    np.testing.assert_allclose(validity_thresholds(inp), c / N, rtol=1e-14)


def test_half_modulus_is_always_invalid():
    inp = DiskBoundInputs(100, np.array([0.5, 1.0]), np.array([0.5, 0.5]), 0.5)
    thr = validity_thresholds(inp)[0]
    assert thr == pytest.approx(MV_CONST * 2 * math.log(2) * (1 + 2.0**-200) / (1 - 2.0**-200), rel=1e-12)
    assert thr == pytest.approx(18.5, abs=0.05)
    r = disk_kappa_bound(inp)
    assert not r.valid and r.kappa_bound == math.inf
    rep = disk_kappa_report(inp)
    assert not rep.valid and rep.value == math.inf and rep.margin < 0


def test_shrinking_separation_never_raises_lower(rng):
    for _ in range(100):
        K = int(rng.integers(2, 8))
        m = rng.uniform(0.5, 1, K)
        d = rng.uniform(0.01, 0.5, K)
        base = DiskBoundInputs(200, m, d, d.min())
        d2 = d.copy()
        d2[rng.integers(K)] *= rng.uniform(0.1, 1)
        assert script_L(DiskBoundInputs(200, m, d2, d2.min())) <= script_L(base)
        assert script_U(base) >= script_L(base)


def test_circle_disk_bound_no_better_than_v2(rng):
    for _ in range(50):
        K = int(rng.integers(2, 6))
        ns = make_node_set(np.ones(K), spread_frequencies(rng, K, 0.8))
        N = 4000
        r = disk_kappa_report(disk_inputs(ns, N))
        if r.valid:
            assert r.value >= improved_circle_bound_v2(N, ns.stats.delta_wrap).value


def test_general_disk_sandwich(rng):
    checked = 0
    for _ in range(200):
        K = int(rng.integers(2, 5))
        N = int(rng.integers(300, 2000))
        ns = make_node_set(rng.uniform(0.999, 1.0, K), spread_frequencies(rng, K, 0.8))
        r = disk_sigma_bounds(disk_inputs(ns, N))
        if not r.valid:
            continue
        checked += 1
        s = extremal_singular_values(VandermondeSpec(ns, N))
        assert s.sigma_min**2 >= r.lower_sigma_min_sq * (1 - 1e-9)
        assert s.sigma_max**2 <= r.upper_sigma_max_sq * (1 + 1e-9)
        assert s.kappa <= r.kappa_bound + 1e-9 + s.kappa_error
    assert checked > 50


def test_inputs_validation():
    with pytest.raises(DomainError):
        DiskBoundInputs(10, np.array([1.1]), np.array([0.5]), 0.5)
    with pytest.raises(DomainError):
        DiskBoundInputs(10, np.array([1.0, 1.0]), np.array([0.5]), 0.5)
    with pytest.raises(DomainError):
        DiskBoundInputs(0, np.array([1.0]), np.array([0.5]), 0.5)


def test_equal_modulus_limits():
    N, d = 100, 0.1
    lo, hi = equal_modulus_sigma_bounds(N, 1 - 1e-9, d)
    assert abs(lo / (N + 0.5 - 1 / d) - 1) < 1e-6
    assert abs(hi / (N - 1 + 1 / d) - 1) < 1e-6
    assert equal_modulus_sigma_bounds(N, 1.0, d) == (N + 0.5 - 1 / d, N - 1 + 1 / d)


@pytest.mark.parametrize("A", ["0.1", "0.5", "0.9", "0.999", "0.9999999", "0.99999999999"])
@pytest.mark.parametrize("N, delta", [(100, 0.1), (37, 0.05), (5000, 0.3)])
def test_equal_modulus_against_high_precision(A, N, delta):
    lo, hi = equal_modulus_sigma_bounds(N, float(A), delta)
    mlo, mhi = mp_equal_modulus(N, float(A), delta)
    assert lo == pytest.approx(float(mlo), rel=1e-9)
    assert hi == pytest.approx(float(mhi), rel=1e-9)


def test_equal_modulus_kappa_worked_example():
    r = equal_modulus_kappa_bound(100, 0.9, 0.1)
    assert r.valid and r.value == pytest.approx(2.5812, abs=1e-4)
    lo, hi = mp_equal_modulus(100, 0.9, 0.1)
    assert r.value == pytest.approx(float(mp.sqrt(hi / lo)), rel=1e-12)


def test_equal_modulus_at_one_is_circle_bound():
    N, d = 100, 0.1
    assert equal_modulus_kappa_bound(N, 1.0, d).value == pytest.approx(math.sqrt((N - 1 + 1 / d) / (N + 0.5 - 1 / d)))


def test_equal_modulus_validity_boundary():
    d = 0.1
    assert not equal_modulus_kappa_bound(9, 0.7, d).valid  # N = 9 < 1/delta - 1/2
    assert equal_modulus_kappa_bound(10, 0.7, d).valid
    for N in (9, 10):
        lower, _ = equal_modulus_sigma_bounds(N, 0.7, d)
        assert (lower > 0) == (N > 1 / d - 0.5)


def test_equal_modulus_sandwich_sampled():
    rng = np.random.default_rng(7)
    for _ in range(50):
        K = int(rng.integers(2, 11))
        xi = (np.arange(K) / K + rng.uniform(0, max(0, 1 / K - 0.1), K)) % 1
        ns = equal_modulus_nodes(0.9, xi)
        d = ns.stats.delta_wrap
        s = extremal_singular_values(VandermondeSpec(ns, 100))
        lo, hi = equal_modulus_sigma_bounds(100, 0.9, d)
        assert lo * (1 - 1e-9) <= s.sigma_min**2 and s.sigma_max**2 <= hi * (1 + 1e-9)


def test_equal_modulus_is_tight_for_uniform_nodes():
    # the bounds are attained with equality by uniformly spaced nodes
    K, A, N = 5, 0.8, 100
    ns = equal_modulus_nodes(A, np.arange(K) / K)
    s = extremal_singular_values(VandermondeSpec(ns, N))
    assert s.kappa == pytest.approx(equal_modulus_kappa_bound(N, A, 1 / K).value, rel=1e-9)


def test_asymptote_closed_forms():
    for K in (2, 5, 10):
        assert equal_modulus_kappa_asymptote(0.8, 1 / K) == pytest.approx(1.25 ** (K - 0.5))
        assert equal_modulus_kappa_asymptote(0.5, 1 / K) == pytest.approx(2 ** (K - 0.5))
    with pytest.raises(DomainError):
        equal_modulus_kappa_asymptote(1.0, 0.5)


@pytest.mark.parametrize("A", [0.1, 0.5, 0.8, 0.95, 0.99])
@pytest.mark.parametrize("K", [2, 4, 10])
def test_large_n_bound_below_asymptote(A, K):
    """At large N the finite bound settles at A**(1 - 1/delta), which never exceeds the asymptote."""
    d = 1 / K
    finite = equal_modulus_kappa_bound(10**4, A, d).value
    assert finite == pytest.approx(A ** (1 - 1 / d), rel=1e-8)
    assert finite <= equal_modulus_kappa_asymptote(A, d)


def test_sieve_factor(rng):
    ns = equal_modulus_nodes(1.0, [0.0, 0.25, 0.5])
    inp = disk_inputs(ns, 50)
    assert disk_sieve_factor(inp, equal_modulus=1.0) == pytest.approx(50 - 1 + 4)
    assert disk_sieve_factor(inp) == pytest.approx(min(script_U(inp), script_U(inp, 49)))
    for _ in range(50):
        K, N = int(rng.integers(2, 6)), int(rng.integers(100, 400))
        A = rng.uniform(0.3, 1)
        ns = equal_modulus_nodes(A, spread_frequencies(rng, K, 0.5))
        factor = disk_sieve_factor(disk_inputs(ns, N), equal_modulus=A)
        y = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        lhs = np.sum(np.abs(vandermonde(VandermondeSpec(ns, N)).T @ y) ** 2)
        assert lhs <= factor * np.sum(np.abs(y) ** 2) * (1 + 1e-9)
