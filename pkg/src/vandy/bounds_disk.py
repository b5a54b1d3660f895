"""Singular-value and condition-number bounds for nodes inside the closed unit disk.

Powers of a modulus ``a`` are evaluated as ``exp(p * ln a)`` and differences
``a**p - 1`` through ``expm1`` so that the 0/0 structure near ``a = 1`` never
cancels catastrophically. Within ``1e-12`` of 1 the limit forms are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds_circle import BoundReport, improved_circle_bound_v2
from .errors import DomainError
from .nodes import NodeSet

MV_CONST = 42.0 / math.pi
NEAR_ONE = 1e-12


@dataclass(frozen=True)
class DiskBoundInputs:
    N: int
    moduli: np.ndarray
    delta_wrap_per_node: np.ndarray
    delta_wrap: float

    def __post_init__(self):
        m = np.asarray(self.moduli, dtype=float)
        d = np.asarray(self.delta_wrap_per_node, dtype=float)
        if self.N < 1:
            raise DomainError("N must be at least 1")
        if m.shape != d.shape or m.ndim != 1:
            raise DomainError("moduli and per-node separations must be 1-D of equal length")
        if np.any(m <= 0) or np.any(m > 1):
            raise DomainError("moduli must lie in (0, 1]")
        if np.any(d <= 0) or not self.delta_wrap > 0:
            raise DomainError("separations must be positive")
        object.__setattr__(self, "moduli", m)
        object.__setattr__(self, "delta_wrap_per_node", d)


def disk_inputs(nodes: NodeSet, N: int) -> DiskBoundInputs:
    st = nodes.stats
    return DiskBoundInputs(int(N), nodes.moduli, st.delta_wrap_per_node, st.delta_wrap)


@dataclass(frozen=True)
class DiskBoundResult:
    lower_sigma_min_sq: float
    upper_sigma_max_sq: float
    kappa_bound: float
    valid: bool
    per_node_margins: np.ndarray


def _check_modulus(a):
    a = np.asarray(a, dtype=float)
    if np.any(~(a > 0)) or np.any(a > 1):
        raise DomainError("modulus must lie in (0, 1]")
    return a


def phi(N: int, a):
    """``(a**(2N) - 1) / (2 ln a)``, equal to N at a = 1. Vectorized over ``a``."""
    a = _check_modulus(a)
    la = np.log(a)
    near = (1.0 - a) < NEAR_ONE
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(near, float(N), np.expm1(2 * N * la) / (2 * la))
    return out if out.ndim else float(out)


def _pow2n(N, a):
    return np.exp(2 * N * np.log(a))


def _node_terms(N, moduli, deltas, sign):
    a = moduli
    return (phi(N, a) + sign * MV_CONST / deltas * (1 + _pow2n(N, a))) / a


def script_L(inputs: DiskBoundInputs, N: int | None = None) -> float:
    """Lower functional; may be negative, validity is judged separately."""
    N = inputs.N if N is None else N
    return float(np.min(_node_terms(N, inputs.moduli, inputs.delta_wrap_per_node, -1.0)))


def script_U(inputs: DiskBoundInputs, N: int | None = None) -> float:
    N = inputs.N if N is None else N
    return float(np.max(_node_terms(N, inputs.moduli, inputs.delta_wrap_per_node, +1.0)))


def validity_thresholds(inputs: DiskBoundInputs) -> np.ndarray:
    """Per-node separation each ``delta_k`` must exceed."""
    a = inputs.moduli
    return MV_CONST * (1 + _pow2n(inputs.N, a)) / phi(inputs.N, a)


def _upper(inputs: DiskBoundInputs) -> float:
    u = script_U(inputs)
    if inputs.N >= 2:
        # the N-1 alternative comes from dilating the frequencies
        u = min(u, script_U(inputs, inputs.N - 1))
    return u


def disk_sigma_bounds(inputs: DiskBoundInputs) -> DiskBoundResult:
    margins = inputs.delta_wrap_per_node - validity_thresholds(inputs)
    valid = bool(np.all(margins > 0))
    lower, upper = script_L(inputs), _upper(inputs)
    kappa = math.sqrt(upper / lower) if valid and lower > 0 else math.inf
    margins.setflags(write=False)
    return DiskBoundResult(lower, upper, kappa, valid and lower > 0, margins)


def disk_kappa_bound(inputs: DiskBoundInputs) -> DiskBoundResult:
    """General disk bound on kappa: ``sqrt(min(U(N), U(N-1)) / L)`` when valid, else infinity."""
    return disk_sigma_bounds(inputs)


def disk_kappa_report(inputs: DiskBoundInputs) -> BoundReport:
    r = disk_sigma_bounds(inputs)
    echo = {"N": inputs.N, "delta_wrap": inputs.delta_wrap, "L": r.lower_sigma_min_sq, "U": r.upper_sigma_max_sq}
    return BoundReport("disk_general", r.kappa_bound, r.valid, float(np.min(r.per_node_margins)), echo)


def _check_equal(A, delta_wrap):
    if not (0 < A <= 1):
        raise DomainError(f"A must lie in (0, 1], got {A}")
    if not delta_wrap > 0:
        raise DomainError(f"wrap-around separation must be positive, got {delta_wrap}")


def _neg_expm1(x):
    """``1 - e**x`` evaluated as ``-expm1(x)``."""
    return -math.expm1(x)


def equal_modulus_sigma_bounds(N: int, A: float, delta_wrap: float) -> tuple[float, float]:
    """Bounds on ``(sigma_min^2, sigma_max^2)`` when every node has modulus ``A``."""
    _check_equal(A, delta_wrap)
    q = 1 / delta_wrap
    x_lo, x_hi = N + 0.5 - q, N - 1 + q
    if 1 - A < NEAR_ONE:
        return x_lo, x_hi
    t = math.log(A)
    denom = delta_wrap * math.expm1(-2 * t * q)
    lower = _neg_expm1(2 * x_lo * t) / (denom * A * A)
    upper = math.exp(-2 * t * q) * _neg_expm1(2 * x_hi * t) / denom
    return lower, upper


def equal_modulus_kappa_bound(N: int, A: float, delta_wrap: float) -> BoundReport:
    _check_equal(A, delta_wrap)
    q = 1 / delta_wrap
    margin = N - (q - 0.5)
    if 1 - A < NEAR_ONE:
        r = improved_circle_bound_v2(N, delta_wrap)
        return BoundReport("equal_modulus", r.value, r.valid, r.margin, {**r.inputs_echo, "A": A})
    t = math.log(A)
    echo = {"N": N, "A": A, "delta_wrap": delta_wrap}

    def value():
        ratio = _neg_expm1(2 * (N - 1 + q) * t) / _neg_expm1(2 * (N + 0.5 - q) * t)
        return math.exp(-t * q) * A * math.sqrt(ratio)

    if margin > 0:
        return BoundReport("equal_modulus", value(), True, margin, echo)
    return BoundReport("equal_modulus", math.inf, False, margin, echo)


def equal_modulus_kappa_asymptote(A: float, delta_wrap: float) -> float:
    """Large-N asymptote ``A**(1/2 - 1/delta)`` of the equal-modulus kappa bound."""
    if not 0 < A < 1:
        raise DomainError(f"A must lie in (0, 1), got {A}")
    _check_equal(A, delta_wrap)
    return A ** (0.5 - 1 / delta_wrap)


def disk_sieve_factor(inputs: DiskBoundInputs, equal_modulus: float | None = None) -> float:
    """Large-sieve factor for nodes in the disk.

    With a common modulus the equal-modulus upper bound is returned,
    otherwise ``min(U(N), U(N-1))``.
    """
    if equal_modulus is not None:
        return equal_modulus_sigma_bounds(inputs.N, equal_modulus, inputs.delta_wrap)[1]
    return _upper(inputs)
