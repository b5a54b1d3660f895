"""Vandermonde and Gram matrices, exact extremal singular values, and Gram-based solves."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError, IllConditioned, RankDeficient
from .nodes import NodeSet

JACOBI_TOL = 1e-14
RANK_TOL = 1e-13
ILL_COND = 1e12


@dataclass(frozen=True)
class VandermondeSpec:
    """An N x K Vandermonde matrix with entries ``z_k**n``, n = 0..N-1."""

    nodes: NodeSet
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N}")
        if self.N < self.nodes.K:
            raise DomainError(f"need N >= K, got N={self.N}, K={self.nodes.K}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def K(self) -> int:
        return self.nodes.K


@dataclass(frozen=True)
class SpectralSummary:
    sigma_min: float
    sigma_max: float
    kappa: float
    eig_residual: float
    gram_cond_estimate: float
    sweeps: int = 0
    rank_deficient: bool = False
    kappa_error: float = 0.0
    """First-order bound on the absolute error of ``kappa`` from rounding in the Gram and its eigenvalues."""

    @property
    def ill_conditioned(self) -> bool:
        return self.gram_cond_estimate > ILL_COND


def _complex_expm1(u):
    """``exp(u) - 1`` for complex arrays without cancellation near zero."""
    x, y = u.real, u.imag
    re = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


def _log_z(nodes: NodeSet):
    """Log-modulus and frequency arrays."""
    return np.log(nodes.moduli), nodes.frequencies


def vandermonde(spec: VandermondeSpec) -> np.ndarray:
    """Dense N x K matrix, powers evaluated in polar form."""
    n = np.arange(spec.N, dtype=float)[:, None]
    lr, xi = _log_z(spec.nodes)
    phase = n * xi[None, :]
    phase -= np.floor(phase)
    return np.exp(n * lr[None, :]) * np.exp(2j * np.pi * phase)


def gram(spec: VandermondeSpec) -> np.ndarray:
    """Closed-form Gram matrix ``V^H V``.

    Entry (k, l) is the geometric sum of ``p = conj(z_k) z_l`` over N terms.
    Writing ``p = exp(u)`` the sum is ``expm1(N u) / expm1(u)``, which stays
    accurate when ``p`` is close to 1.
    """
    N = spec.N
    lr, xi = _log_z(spec.nodes)
    dxi = xi[None, :] - xi[:, None]
    theta = dxi - np.rint(dxi)
    lsum = lr[:, None] + lr[None, :]
    u = lsum + 2j * np.pi * theta
    nphase = N * theta
    nphase -= np.rint(nphase)
    nu = N * lsum + 2j * np.pi * nphase
    one = (lsum == 0.0) & (theta == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        G = _complex_expm1(nu) / _complex_expm1(u)
    G[one] = N
    return 0.5 * (G + G.conj().T)


@njit(cache=True, nogil=True)
def _jacobi_hermitian(A, tol, max_sweeps):
    """Cyclic Jacobi on a Hermitian matrix; returns (eigenvalues, eigenvectors, sweeps)."""
    n = A.shape[0]
    A = A.copy()
    V = np.eye(n, dtype=np.complex128)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += A[i, j].real ** 2 + A[i, j].imag ** 2
    target = tol * math.sqrt(total)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += A[i, j].real ** 2 + A[i, j].imag ** 2
        if math.sqrt(2.0 * off) < target:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                e = apq / mag
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                se = s * e
                sec = s * e.conjugate()
                for i in range(n):
                    if i != p and i != q:
                        aip = A[i, p]
                        aiq = A[i, q]
                        nip = c * aip - sec * aiq
                        niq = se * aip + c * aiq
                        A[i, p] = nip
                        A[i, q] = niq
                        A[p, i] = nip.conjugate()
                        A[q, i] = niq.conjugate()
                A[p, p] = app - t * mag
                A[q, q] = aqq + t * mag
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    vip = V[i, p]
                    viq = V[i, q]
                    V[i, p] = c * vip - sec * viq
                    V[i, q] = se * vip + c * viq
    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i].real
    return w, V, sweeps


def hermitian_eig(A: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi.

    Sweeps visit the upper triangle in row-major order and stop once the
    off-diagonal Frobenius mass drops below ``tol * ||A||_F``. Eigenvalues
    are returned in ascending order with matching eigenvector columns.
    """
    A = np.ascontiguousarray(A, dtype=np.complex128)
    w, V, sweeps = _jacobi_hermitian(A, tol, max_sweeps)
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], sweeps


@dataclass(frozen=True)
class GramEig:
    """Gram matrix with its eigen-decomposition and the derived spectral summary."""

    G: np.ndarray
    w: np.ndarray
    Q: np.ndarray
    summary: SpectralSummary


def _summarize(G, w, Q, sweeps) -> SpectralSummary:
    lam_min, lam_max = float(w[0]), float(w[-1])
    resid = float(np.max(np.abs(G @ Q - Q * w[None, :]))) if len(w) else 0.0
    rank_def = not (lam_min >= RANK_TOL * lam_max)
    smin = math.sqrt(max(lam_min, 0.0))
    smax = math.sqrt(max(lam_max, 0.0))
    # eigenvalue perturbation: residual norm plus Gram rounding
    lam_err = math.sqrt(len(w)) * resid + 8 * len(w) * np.finfo(float).eps * abs(lam_max)
    if lam_min > 0:
        cond = lam_max / lam_min
        kappa = math.sqrt(cond)
        kerr = 0.5 * kappa * (lam_err / lam_min + lam_err / lam_max) if lam_min > lam_err else math.inf
    else:
        cond = kappa = kerr = math.inf
    return SpectralSummary(smin, smax, kappa, resid, cond, sweeps, rank_def, kerr)


def gram_eig(spec: VandermondeSpec) -> GramEig:
    G = gram(spec)
    w, Q, sweeps = hermitian_eig(G)
    return GramEig(G, w, Q, _summarize(G, w, Q, sweeps))


def _require_full_rank(ge: GramEig) -> None:
    s = ge.summary
    if s.rank_deficient:
        raise RankDeficient(
            f"Gram matrix is numerically singular (cond estimate {s.gram_cond_estimate:.3e})", s
        )


def extremal_singular_values(spec: VandermondeSpec, *, flag_only: bool = False) -> SpectralSummary:
    """Exact sigma_min, sigma_max and kappa from the Gram eigenvalues.

    A numerically singular Gram raises :class:`RankDeficient` carrying the
    summary; with ``flag_only=True`` the summary is returned instead and its
    ``rank_deficient`` attribute is set.
    """
    ge = gram_eig(spec)
    if not flag_only:
        _require_full_rank(ge)
    return ge.summary


def infinity_norm(spec: VandermondeSpec) -> float:
    """Maximum absolute row sum of the Vandermonde matrix."""
    n = np.arange(spec.N, dtype=float)[:, None]
    rows = np.exp(n * np.log(spec.nodes.moduli)[None, :]).sum(axis=1)
    return float(rows.max())


def _warn_if_ill(ge: GramEig) -> None:
    if ge.summary.ill_conditioned:
        warnings.warn(
            f"Gram condition estimate {ge.summary.gram_cond_estimate:.3e} exceeds {ILL_COND:.0e}",
            IllConditioned,
            stacklevel=3,
        )


def _solve_with(spec: VandermondeSpec, ge: GramEig, rhs: np.ndarray) -> np.ndarray:
    # conj(G)^{-1} rhs = conj(G^{-1} conj(rhs)), and G^{-1} = Q diag(1/w) Q^H
    y = ge.Q @ ((ge.Q.conj().T @ np.conj(rhs)) / ge.w)
    return np.conj(vandermonde(spec) @ y)


def min_norm_solve_transpose(spec: VandermondeSpec, rhs) -> np.ndarray:
    """Minimum 2-norm solution ``f`` of ``V^T f = rhs``.

    Computed as ``conj(V) conj(G)^{-1} rhs`` with the inverse applied through
    the Gram eigen-decomposition. Emits :class:`IllConditioned` when the
    Gram condition estimate exceeds 1e12.
    """
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape != (spec.K,):
        raise DomainError(f"rhs must have length K={spec.K}")
    ge = gram_eig(spec)
    _require_full_rank(ge)
    _warn_if_ill(ge)
    return _solve_with(spec, ge, rhs)


def _inverse_sqrt_with(ge: GramEig) -> np.ndarray:
    S = (ge.Q / np.sqrt(ge.w)[None, :]) @ ge.Q.conj().T
    return 0.5 * (S + S.conj().T)


def gram_inverse_sqrt(spec: VandermondeSpec) -> np.ndarray:
    """Hermitian positive definite ``G^{-1/2}``."""
    ge = gram_eig(spec)
    _require_full_rank(ge)
    return _inverse_sqrt_with(ge)


def dump_matrix(M: np.ndarray) -> str:
    """Debug text dump: one row per line, ``re im`` pairs separated by spaces."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return "\n".join(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row) for row in M) + "\n"
