"""Numerical checks of Hilbert-type inequalities, the Fejér identity, and the circle large sieve.

Each check evaluates the bilinear form by direct summation and compares it
with its bound(s). Sums over index pairs use numpy's pairwise reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NeedTwoNodes
from .nodes import wrap_distance

SH_CONST = 84.0 / math.pi
MV_CONST = 42.0 / math.pi


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs_lower: float | None
    rhs_upper: float | None
    passed: bool
    slack: float

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs_lower": self.rhs_lower,
            "rhs_upper": self.rhs_upper,
            "pass": self.passed,
            "slack": self.slack,
        }


def _check(name, lhs, lower=None, upper=None) -> InequalityCheck:
    lhs = float(lhs)
    tol = 1e-9 * max(1.0, abs(lhs))
    slacks = []
    if lower is not None:
        slacks.append(lhs - lower)
    if upper is not None:
        slacks.append(upper - lhs)
    slack = min(slacks) if slacks else math.inf
    ok = (lower is None or lower - tol <= lhs) and (upper is None or lhs <= upper + tol)
    return InequalityCheck(
        name,
        lhs,
        None if lower is None else float(lower),
        None if upper is None else float(upper),
        bool(ok),
        float(slack),
    )


def _vec(x, dtype=complex):
    return np.atleast_1d(np.asarray(x, dtype=dtype))


def _bilinear(a, kernel, *, off_diagonal: bool):
    """``sum_{k,l} a_k conj(a_l) kernel[k,l]`` with the diagonal optionally dropped."""
    M = a[:, None] * np.conj(a)[None, :] * kernel
    if off_diagonal:
        np.fill_diagonal(M, 0.0)
    return np.sum(M)


def _safe_inv(x):
    """Elementwise reciprocal with the diagonal set to zero."""
    x = np.array(x, dtype=complex)
    np.fill_diagonal(x, 1.0)
    out = 1.0 / x
    np.fill_diagonal(out, 0.0)
    return out


def _min_offdiag(D):
    D = np.array(D, dtype=float)
    if D.shape[0] < 2:
        return math.inf
    np.fill_diagonal(D, np.inf)
    return D.min(axis=1)


def per_node_separation(u):
    """``min_{l != k} |u_k - u_l|`` for each k (infinite for a single point)."""
    u = _vec(u, float)
    if len(u) < 2:
        return np.full(len(u), math.inf)
    return _min_offdiag(np.abs(u[:, None] - u[None, :]))


def per_node_wrap_separation(xi):
    xi = _vec(xi, float)
    if len(xi) < 2:
        return np.full(len(xi), math.inf)
    return _min_offdiag(wrap_distance(xi[:, None] - xi[None, :]))


def _require_separated(sep):
    if not np.all(sep > 0):
        raise DomainError("points must be pairwise separated")


def check_hilbert_classic(x) -> InequalityCheck:
    x = _vec(x)
    k = np.arange(len(x), dtype=float)
    lhs = abs(_bilinear(x, _safe_inv(k[:, None] - k[None, :]), off_diagonal=True))
    return _check("hilbert_classic", lhs, upper=math.pi * np.sum(np.abs(x) ** 2))


def check_mv_real(u, alpha) -> InequalityCheck:
    u, alpha = _vec(u, float), _vec(alpha)
    sep = per_node_separation(u)
    _require_separated(sep)
    delta = float(np.min(sep))
    lhs = abs(_bilinear(alpha, _safe_inv(2 * np.pi * (u[:, None] - u[None, :])), off_diagonal=True))
    return _check("mv_real", lhs, upper=np.sum(np.abs(alpha) ** 2) / (2 * delta))


def check_mv_wrap(xi, a) -> InequalityCheck:
    xi, a = _vec(xi, float), _vec(a)
    sep = per_node_wrap_separation(xi)
    _require_separated(sep)
    delta = float(np.min(sep))
    lhs = abs(_bilinear(a, _safe_inv(np.sin(np.pi * (xi[:, None] - xi[None, :]))), off_diagonal=True))
    return _check("mv_wrap", lhs, upper=np.sum(np.abs(a) ** 2) / delta)


def _fraction_kernel(lambdas, us):
    rho = lambdas + 2j * np.pi * us
    return 1.0 / (rho[:, None] + np.conj(rho)[None, :])


def check_mv_complex(lambdas, us, alpha) -> InequalityCheck:
    """Off-diagonal form with kernel ``1/(rho_k + conj(rho_l))`` against ``(42/pi) sum |alpha_k|^2/delta_k``."""
    lam, u, alpha = _vec(lambdas, float), _vec(us, float), _vec(alpha)
    if np.any(lam <= 0):
        raise DomainError("real parts must be positive")
    sep = per_node_separation(u)
    _require_separated(sep)
    lhs = abs(_bilinear(alpha, _fraction_kernel(lam, u), off_diagonal=True))
    return _check("mv_complex", lhs, upper=MV_CONST * np.sum(np.abs(alpha) ** 2 / sep))


def full_fraction_sum(lambdas, us, alpha) -> complex:
    """Full double sum (diagonal included) with kernel ``1/(rho_k + conj(rho_l))``."""
    lam, u, alpha = _vec(lambdas, float), _vec(us, float), _vec(alpha)
    return complex(_bilinear(alpha, _fraction_kernel(lam, u), off_diagonal=False))


def _resolve_delta(sep, delta):
    if delta is not None:
        if not delta > 0:
            raise DomainError("delta must be positive")
        return float(delta)
    if len(sep) < 2:
        raise NeedTwoNodes("a single point has no separation; pass delta explicitly")
    return float(np.min(sep))


def graham_vaaler_constants(lam: float, delta: float) -> tuple[float, float]:
    """``1/(delta (e^x - 1))`` and ``e^x/(delta (e^x - 1))`` with ``x = 2 lam/delta``."""
    x = 2 * lam / delta
    return 1 / (delta * math.expm1(x)), 1 / (delta * -math.expm1(-x))


def check_graham_vaaler_fraction(lam: float, us, alpha, delta: float | None = None) -> InequalityCheck:
    """Two-sided check of the full fraction-kernel sum when all real parts equal ``lam``.

    ``delta`` overrides the separation, which is required for a single point.
    """
    u, alpha = _vec(us, float), _vec(alpha)
    if not lam > 0:
        raise DomainError("lam must be positive")
    sep = per_node_separation(u)
    _require_separated(sep)
    delta = _resolve_delta(sep, delta)
    lo, hi = graham_vaaler_constants(lam, delta)
    total = full_fraction_sum(np.full(len(u), lam), u, alpha)
    norm = np.sum(np.abs(alpha) ** 2)
    return _check("graham_vaaler", total.real, lower=lo * norm, upper=hi * norm)


def _sh_kernel(ds, xi):
    arg = 0.5 * (ds[:, None] + ds[None, :]) + 1j * np.pi * (xi[:, None] - xi[None, :])
    return 1.0 / np.sinh(arg)


def sh_sum(ds, xi, a) -> complex:
    """Full double sum with kernel ``1/sh((r_k + conj(r_l))/2)``, ``r_k = d_k + 2 pi i xi_k``."""
    ds, xi, a = _vec(ds, float), _vec(xi, float), _vec(a)
    return complex(_bilinear(a, _sh_kernel(ds, xi), off_diagonal=False))


def check_sh_general(ds, xi, a) -> InequalityCheck:
    ds, xi, a = _vec(ds, float), _vec(xi, float), _vec(a)
    if len(xi) < 2:
        raise NeedTwoNodes("the per-node bound needs at least two points")
    if np.any(ds <= 0):
        raise DomainError("d values must be positive")
    sep = per_node_wrap_separation(xi)
    _require_separated(sep)
    w = np.abs(a) ** 2
    lower = np.sum((1 / ds - SH_CONST / sep) * w)
    upper = np.sum((1 / ds + SH_CONST / sep) * w)
    return _check("sh_general", sh_sum(ds, xi, a).real, lower=lower, upper=upper)


def sh_equal_constants(d: float, delta: float, sharper_lower: bool = False) -> tuple[float, float]:
    """Constants of the equal-``d`` sinh-kernel bounds.

    ``sharper_lower`` multiplies the lower constant by ``e**d``.
    """
    x = 2 * d / delta
    lo = 2 / (delta * math.expm1(x))
    if sharper_lower:
        lo = 2 * math.exp(d - x) / (delta * -math.expm1(-x))
    hi = 2 / (delta * -math.expm1(-x))
    return lo, hi


def check_sh_equal_d(
    d: float, xi, a, sharper_lower: bool = False, delta: float | None = None
) -> InequalityCheck:
    xi, a = _vec(xi, float), _vec(a)
    if not d > 0:
        raise DomainError("d must be positive")
    sep = per_node_wrap_separation(xi)
    _require_separated(sep)
    delta = _resolve_delta(sep, delta)
    lo, hi = sh_equal_constants(d, delta, sharper_lower)
    norm = np.sum(np.abs(a) ** 2)
    name = "sh_equal_d_sharp" if sharper_lower else "sh_equal_d"
    return _check(name, sh_sum(np.full(len(xi), d), xi, a).real, lower=lo * norm, upper=hi * norm)


def fejer_partial_sum(rho: complex, N: int) -> complex:
    """``sum_{|q|<=N} (1 - |q|/N) (-1)^q / (rho + 2 pi i q)``.

    The q and -q terms are combined into ``2 rho / (rho^2 + 4 pi^2 q^2)``.
    """
    rho = complex(rho)
    q = np.arange(1, N + 1, dtype=float)
    sign = np.where(q % 2 == 0, 1.0, -1.0)
    terms = sign * (1 - q / N) * 2 * rho / (rho * rho + 4 * np.pi**2 * q * q)
    return 1 / rho + complex(np.sum(terms))


def fejer_limit(rho: complex) -> complex:
    return 1 / (2 * np.sinh(complex(rho) / 2))


def fejer_deviation(rho: complex, N: int) -> float:
    return abs(fejer_partial_sum(rho, N) - fejer_limit(rho))


def check_fejer_identity(
    rho: complex, N: int, calibration_N: int = 1000, slack: float = 2.0
) -> InequalityCheck:
    """Check that the Fejér partial sum approaches ``1/(2 sh(rho/2))`` at rate 1/N.

    The constant ``C`` is calibrated as ``calibration_N * deviation(calibration_N)``;
    the check passes when ``deviation(N) <= slack * C / N`` plus a rounding floor.
    """
    rho = complex(rho)
    if rho.real == 0 and abs(rho.imag / (2 * math.pi) - round(rho.imag / (2 * math.pi))) == 0:
        raise DomainError("rho must avoid 2 pi i Z")
    if N < 1:
        raise DomainError("N must be positive")
    C = calibration_N * fejer_deviation(rho, calibration_N)
    floor = 1e-13 * max(1.0, abs(fejer_limit(rho)), 1 / abs(rho))
    return _check("fejer", fejer_deviation(rho, N), upper=slack * C / N + floor)


def large_sieve_sums(y, frequencies) -> np.ndarray:
    """``|S(xi_k)|^2`` with ``S(xi) = sum_n y_n exp(-2 pi i n xi)``, by direct summation."""
    y = _vec(y)
    xi = _vec(frequencies, float)
    n = np.arange(len(y), dtype=float)
    phase = np.outer(xi, n)
    phase -= np.floor(phase)
    S = np.exp(-2j * np.pi * phase) @ y
    return np.abs(S) ** 2


def check_large_sieve_circle(y, frequencies, variant: str = "selberg") -> InequalityCheck:
    y = _vec(y)
    if len(_vec(frequencies, float)) < 2:
        raise NeedTwoNodes("the sieve factor needs at least two frequencies")
    sep = per_node_wrap_separation(frequencies)
    _require_separated(sep)
    delta = float(np.min(sep))
    N = len(y)
    if variant == "selberg":
        factor = N - 1 + 1 / delta
    elif variant == "montgomery":
        factor = N + 1 / delta
    else:
        raise DomainError(f"unknown variant {variant!r}")
    lhs = np.sum(large_sieve_sums(y, frequencies))
    return _check(f"large_sieve_{variant}", lhs, upper=factor * np.sum(np.abs(y) ** 2))


# ---------------------------------------------------------------- random suites

def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _coeffs(rng, K):
    return rng.standard_normal(K) + 1j * rng.standard_normal(K)


def _frequencies(rng, K):
    """Spread-out frequencies as in the Monte-Carlo protocol, with a random floor."""
    d = rng.uniform(0.2, 1.0) / K
    r = rng.uniform(0.0, max(0.0, 1 / K - d), K)
    return (np.arange(K) / K + r) % 1.0


def _reals(rng, K):
    """Distinct real points with log-uniform gaps."""
    gaps = _log_uniform(rng, 1e-2, 2.0, K)
    return np.cumsum(gaps) - rng.uniform(0, np.sum(gaps))


def random_check(name: str, rng: np.random.Generator, max_K: int = 40) -> InequalityCheck:
    """One random instance of the named check."""
    K = int(rng.integers(1, max_K + 1))
    if name == "hilbert_classic":
        return check_hilbert_classic(_coeffs(rng, K))
    if name == "mv_real":
        return check_mv_real(_reals(rng, K), _coeffs(rng, K))
    if name == "mv_wrap":
        return check_mv_wrap(_frequencies(rng, K), _coeffs(rng, K))
    if name == "mv_complex":
        return check_mv_complex(_log_uniform(rng, 1e-4, 2.0, K), _reals(rng, K), _coeffs(rng, K))
    if name == "graham_vaaler":
        u = _reals(rng, K)
        delta = None if K > 1 else float(_log_uniform(rng, 1e-2, 2.0))
        return check_graham_vaaler_fraction(float(_log_uniform(rng, 1e-4, 2.0)), u, _coeffs(rng, K), delta)
    if name == "sh_general":
        K = max(K, 2)
        return check_sh_general(_log_uniform(rng, 1e-4, 2.0, K), _frequencies(rng, K), _coeffs(rng, K))
    if name in ("sh_equal_d", "sh_equal_d_sharp"):
        xi = _frequencies(rng, K)
        delta = None if K > 1 else float(rng.uniform(0.05, 0.5))
        d = float(_log_uniform(rng, 1e-4, 2.0))
        return check_sh_equal_d(d, xi, _coeffs(rng, K), name.endswith("sharp"), delta)
    if name in ("large_sieve_selberg", "large_sieve_montgomery"):
        N = int(rng.integers(1, 200))
        K = max(K, 2)
        return check_large_sieve_circle(_coeffs(rng, N), _frequencies(rng, K), name.rsplit("_", 1)[1])
    if name == "fejer":
        rho = float(_log_uniform(rng, 1e-2, 10.0)) + 2j * math.pi * rng.uniform(-3, 3)
        return check_fejer_identity(rho, 10_000)
    raise DomainError(f"unknown check {name!r}")


HILBERT_SUITE = (
    "hilbert_classic",
    "mv_real",
    "mv_wrap",
    "mv_complex",
    "graham_vaaler",
    "sh_general",
    "sh_equal_d",
    "sh_equal_d_sharp",
)
SIEVE_SUITE = ("large_sieve_selberg", "large_sieve_montgomery", "fejer")
SUITES = {"hilbert": HILBERT_SUITE, "sieve": SIEVE_SUITE, "all": HILBERT_SUITE + SIEVE_SUITE}


@dataclass(frozen=True)
class SuiteSummary:
    name: str
    trials: int
    violations: int
    min_slack: float


def run_suite(suite: str, trials: int, seed: int, max_K: int = 40) -> list[SuiteSummary]:
    """Run ``trials`` seeded random instances of every check in a suite.

    Each check draws from its own stream derived from ``(seed, check index)``.
    """
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    out = []
    for i, name in enumerate(SUITES[suite]):
        rng = np.random.default_rng([seed, i])
        bad, slack = 0, math.inf
        for _ in range(trials):
            c = random_check(name, rng, max_K)
            bad += not c.passed
            slack = min(slack, c.slack)
        out.append(SuiteSummary(name, trials, bad, slack))
    return out
