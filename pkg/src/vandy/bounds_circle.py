"""Condition-number bounds for Vandermonde matrices with nodes on the unit circle.

Every bound takes scalar inputs and returns a :class:`BoundReport`. A bound
whose validity condition fails is reported with ``valid=False`` and an
infinite value rather than raising, so sweeps can tabulate invalid regions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NeedTwoNodes
from .nodes import NodeSet


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    valid: bool
    margin: float
    inputs_echo: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "valid": self.valid,
            "margin": self.margin,
            "inputs": dict(self.inputs_echo),
        }


def _report(name, margin, value_fn, echo) -> BoundReport:
    if margin > 0:
        return BoundReport(name, float(value_fn()), True, float(margin), echo)
    return BoundReport(name, math.inf, False, float(margin), echo)


def _check_delta(delta_wrap):
    if not delta_wrap > 0:
        raise DomainError(f"wrap-around separation must be positive, got {delta_wrap}")


def gautschi_inverse_inf_bounds(nodes: NodeSet) -> tuple[float, float]:
    """Lower and upper bounds on the infinity norm of the inverse square Vandermonde matrix.

    Accepts general complex nodes (moduli above 1 included). The upper
    bound uses the factor ``1 + |z_l|`` for each ``l != k``, which is the
    form attained with equality by nodes on a common ray.
    """
    if nodes.K < 2:
        raise NeedTwoNodes("the inverse bounds need at least two nodes")
    z = nodes.z
    r = nodes.moduli
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, 1.0)
    lo = np.maximum(1.0, r)[None, :] / diff
    hi = (1.0 + r)[None, :] / diff
    np.fill_diagonal(lo, 1.0)
    np.fill_diagonal(hi, 1.0)
    return float(np.prod(lo, axis=1).max()), float(np.prod(hi, axis=1).max())


def gautschi_kappa_inf_bound(nodes: NodeSet) -> float:
    """Upper bound on the infinity-norm condition number of the square matrix."""
    from .matrix import VandermondeSpec, infinity_norm

    _, upper = gautschi_inverse_inf_bounds(nodes)
    return infinity_norm(VandermondeSpec(nodes, nodes.K)) * upper


def nearest_integer(x: float) -> int:
    """Nearest integer with ties to even."""
    return int(round(x))


def ferreira_bound(N: int, delta_wrap: float, delta_wrap_max: float) -> BoundReport:
    _check_delta(delta_wrap)
    if not 0 < delta_wrap_max <= 0.5:
        raise DomainError(f"maximum wrap distance must lie in (0, 1/2], got {delta_wrap_max}")
    beta = math.pi * delta_wrap_max / (math.sqrt(3.0) * math.sin(math.pi * delta_wrap_max) * delta_wrap)
    nb = nearest_integer(beta)
    echo = {"N": N, "delta_wrap": delta_wrap, "delta_wrap_max": delta_wrap_max, "beta": beta, "beta_rounded": nb}
    if nb == 0:
        return BoundReport("ferreira", math.inf, False, -math.inf, echo)
    t = nb + beta * beta / nb - 1.0
    echo["t"] = t
    return _report("ferreira", N - t, lambda: math.sqrt((N + t) / (N - t)), echo)


def bazan_circle_bound(N: int, K: int, sigma: float) -> BoundReport:
    if not sigma > 0:
        raise DomainError(f"minimum distance must be positive, got {sigma}")
    t = (2 * K - 2) / sigma
    echo = {"N": N, "K": K, "sigma": sigma}
    return _report("bazan_circle", N - t, lambda: math.sqrt((N + t) / (N - t)), echo)


def liao_fannjiang_bound(N: int, delta_wrap: float) -> BoundReport:
    """Bound from discrete Ingham inequalities.

    Validity requires N >= 7, the separation threshold, and a positive
    denominator. The margin is the smallest of the separation slack and the
    denominator; ``inputs_echo['failed']`` names the condition that failed.
    """
    _check_delta(delta_wrap)
    d = delta_wrap
    echo = {"N": N, "delta_wrap": d}
    if N < 7:
        echo["failed"] = "N>=7"
        return BoundReport("liao_fannjiang", math.inf, False, float(N - 7), echo)
    threshold = math.sqrt(2 / math.pi) / (N * math.sqrt(2 / math.pi - 4 / N))
    c = math.ceil((N - 1) / 2)
    num = 8 * math.sqrt(2) * c / math.pi + math.sqrt(2) / (2 * math.pi * c * d * d) + 3 * math.sqrt(2)
    den = 2 * (N - 1) / math.pi - 2 / (math.pi * (N - 1) * d * d) - 4
    echo.update(threshold=threshold, numerator=num, denominator=den)
    if d <= threshold:
        echo["failed"] = "separation"
    elif den <= 0:
        echo["failed"] = "denominator"
    return _report("liao_fannjiang", min(d - threshold, den), lambda: math.sqrt(num / den), echo)


def selberg_moitra_bound(N: int, delta_wrap: float) -> BoundReport:
    _check_delta(delta_wrap)
    q = 1 / delta_wrap
    echo = {"N": N, "delta_wrap": delta_wrap}
    return _report("selberg_moitra", N - 1 - q, lambda: math.sqrt((N - 1 + q) / (N - 1 - q)), echo)


def improved_circle_bound_v1(N: int, delta_wrap: float) -> BoundReport:
    _check_delta(delta_wrap)
    q = 1 / delta_wrap
    echo = {"N": N, "delta_wrap": delta_wrap}
    return _report("improved_v1", N - q, lambda: math.sqrt((N - 1 + q) / (N - q)), echo)


def improved_circle_bound_v2(N: int, delta_wrap: float) -> BoundReport:
    """Circle bound that also admits square matrices (N = K)."""
    _check_delta(delta_wrap)
    q = 1 / delta_wrap
    echo = {"N": N, "delta_wrap": delta_wrap}
    return _report("improved_v2", N + 0.5 - q, lambda: math.sqrt((N - 1 + q) / (N + 0.5 - q)), echo)


def circle_sigma_bounds(N: int, delta_wrap: float) -> tuple[float, float]:
    """Bounds ``(lower on sigma_min^2, upper on sigma_max^2)`` for unit-circle nodes."""
    _check_delta(delta_wrap)
    q = 1 / delta_wrap
    return N + 0.5 - q, N - 1 + q


def all_circle_bounds(N: int, nodes: NodeSet) -> list[BoundReport]:
    """Every unit-circle kappa bound evaluated on one node set."""
    st = nodes.stats
    return [
        ferreira_bound(N, st.delta_wrap, st.delta_wrap_max),
        bazan_circle_bound(N, nodes.K, st.sigma_euclid),
        liao_fannjiang_bound(N, st.delta_wrap),
        selberg_moitra_bound(N, st.delta_wrap),
        improved_circle_bound_v1(N, st.delta_wrap),
        improved_circle_bound_v2(N, st.delta_wrap),
    ]
