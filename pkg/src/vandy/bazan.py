"""Bazán's implicit condition-number bound for nodes in the closed unit disk.

The construction projects the companion-like operator ``Gamma`` (shift down,
with the minimum-norm solution ``f_hat`` of ``V^T f = z**N`` as last column)
onto the orthonormalized column space of ``conj(V)``. Its departure from
normality drives the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds_circle import BoundReport
from .errors import DomainError, NeedTwoNodes
from .matrix import (
    ILL_COND,
    VandermondeSpec,
    _inverse_sqrt_with,
    _require_full_rank,
    _solve_with,
    gram_eig,
    hermitian_eig,
    vandermonde,
)
from .nodes import NodeSet


@dataclass(frozen=True)
class BazanIntermediates:
    f_hat: np.ndarray
    f_hat_norm_sq: float
    g_matrix: np.ndarray
    d_n_sq: float
    eta: float
    eta_excess: float
    sigma_max_g: float
    ill_conditioned: bool
    gram_cond_estimate: float = math.nan

    def as_dict(self) -> dict:
        return {
            "f_hat_norm_sq": self.f_hat_norm_sq,
            "d_n_sq": self.d_n_sq,
            "eta": self.eta,
            "ill_conditioned": self.ill_conditioned,
        }


def psi(N: int, x: float) -> float:
    """``sum_{n<N} x**(2n)`` via its closed form."""
    if not 0 < x <= 1:
        raise DomainError(f"x must lie in (0, 1], got {x}")
    if x == 1.0:
        return float(N)
    lx = math.log(x)
    return math.expm1(2 * N * lx) / math.expm1(2 * lx)


def _eta_minus_two(K, d_sq, sigma, psi_ratio):
    """``eta - 2``, evaluated as ``K * expm1(...)`` to avoid cancelling ``K`` against ``K``."""
    x = d_sq / ((K - 1) * sigma**2)
    if x <= -1:
        return -math.inf
    return K * math.expm1(0.5 * (K - 1) * math.log1p(x) + 0.5 * math.log(psi_ratio))


def _shift_down(W):
    out = np.zeros_like(W)
    out[1:] = W[:-1]
    return out


def bazan_intermediates(spec: VandermondeSpec) -> BazanIntermediates:
    nodes = spec.nodes
    if nodes.K < 2:
        raise NeedTwoNodes("the bound needs at least two nodes")
    if not nodes.in_closed_disk:
        raise DomainError("nodes must lie in the closed unit disk")
    N = spec.N
    ge = gram_eig(spec)
    _require_full_rank(ge)
    st = nodes.stats

    z_N = np.exp(N * np.log(nodes.moduli)) * np.exp(2j * np.pi * ((N * nodes.frequencies) % 1.0))
    f_hat = _solve_with(spec, ge, z_N)
    W = np.conj(vandermonde(spec) @ _inverse_sqrt_with(ge))
    WH = W.conj().T
    G_N = WH @ _shift_down(W) + np.outer(WH @ f_hat, W[-1])

    d_sq = float(np.sum(np.abs(G_N) ** 2) - np.sum(nodes.moduli**2))
    ratio = psi(N, st.a_max) / psi(N, st.a_min)
    excess = _eta_minus_two(nodes.K, d_sq, st.sigma_euclid, ratio)
    w, _, _ = hermitian_eig(G_N.conj().T @ G_N)
    resid = np.abs(vandermonde(spec).T @ f_hat - z_N).max() / max(np.abs(z_N).max(), 1e-300)
    ill = ge.summary.gram_cond_estimate > ILL_COND or not resid <= 1e-8
    return BazanIntermediates(
        f_hat=f_hat,
        f_hat_norm_sq=float(np.sum(np.abs(f_hat) ** 2)),
        g_matrix=G_N,
        d_n_sq=d_sq,
        eta=2 + excess,
        eta_excess=excess,
        sigma_max_g=math.sqrt(max(float(w[-1]), 0.0)),
        ill_conditioned=bool(ill),
        gram_cond_estimate=ge.summary.gram_cond_estimate,
    )


def _upper_from_excess(e):
    # eta = 2 + e, so eta^2 - 4 = e (4 + e)
    return 0.5 * (2 + e + math.sqrt(e * (4 + e)))


def bazan_bounds(spec: VandermondeSpec) -> tuple[float, BoundReport]:
    """Lower bound ``sigma_max(G_N)/A_max`` and the eta-based upper bound on kappa.

    If rounding pushes ``eta`` below 2 the upper bound is reported invalid
    with the offending value in ``inputs_echo`` rather than clipped.
    """
    it = bazan_intermediates(spec)
    st = spec.nodes.stats
    lower = it.sigma_max_g / st.a_max
    echo = {
        "N": spec.N,
        "K": spec.K,
        "eta": it.eta,
        "d_n_sq": it.d_n_sq,
        "f_hat_norm_sq": it.f_hat_norm_sq,
        "ill_conditioned": it.ill_conditioned,
    }
    if it.eta_excess >= 0:
        # eta == 2 gives the bound 1; keep the margin strictly positive for valid reports
        report = BoundReport("bazan", _upper_from_excess(it.eta_excess), True, max(it.eta_excess, math.ulp(1.0)), echo)
    else:
        report = BoundReport("bazan", math.inf, False, it.eta_excess, echo)
    return lower, report


def d_n_sq_sandwich(nodes: NodeSet, f_hat_norm_sq: float) -> tuple[float, float]:
    """Bracket on the departure from normality for N >= K."""
    a2 = nodes.moduli**2
    prod, total = float(np.prod(a2)), float(np.sum(a2))
    K = nodes.K
    return (K - 1) + prod / (1 + f_hat_norm_sq) - total, (K - 1) + f_hat_norm_sq + prod - total


def d_n_sq_limit(nodes: NodeSet) -> float:
    """Large-N limit of the departure from normality."""
    a2 = nodes.moduli**2
    return (nodes.K - 1) + float(np.prod(a2)) - float(np.sum(a2))


def bazan_asymptotic(nodes: NodeSet) -> tuple[float, float]:
    """Large-N bracket ``(1/A_max, upper)`` on the limiting condition number.

    Raises :class:`DomainError` when ``A_max = 1``; in that equal-modulus
    case the limit is exactly 1.
    """
    st = nodes.stats
    if st.a_max >= 1.0:
        raise DomainError("the asymptotic form needs A_max < 1 (the limit is 1 on the circle)")
    ratio = (1 - st.a_min**2) / (1 - st.a_max**2)
    return 1 / st.a_max, _upper_from_excess(_eta_minus_two(nodes.K, d_n_sq_limit(nodes), st.sigma_euclid, ratio))
