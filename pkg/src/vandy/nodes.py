"""Node configurations in the closed unit disk and their separation statistics."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import DomainError, DuplicateNode, NeedTwoNodes


def reduce_frequency(x):
    """Map frequencies into [0, 1) via ``x - floor(x)``."""
    x = np.asarray(x, dtype=float)
    r = x - np.floor(x)
    # x slightly below an integer can round up to exactly 1.0
    return np.where(r >= 1.0, 0.0, r)


def wrap_distance(x):
    """Distance from ``x`` to the nearest integer."""
    x = np.asarray(x, dtype=float)
    return np.abs(x - np.rint(x))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SeparationStats:
    delta_wrap_per_node: np.ndarray
    delta_wrap: float
    delta_wrap_max: float
    sigma_euclid: float
    sigma_euclid_per_node: np.ndarray
    a_min: float
    a_max: float


@dataclass(frozen=True, eq=False)
class NodeSet:
    """K nodes ``z_k = moduli[k] * exp(2j*pi*frequencies[k])``.

    Construct through :func:`make_node_set`, which validates and reduces
    the frequencies. Instances are immutable.
    """

    moduli: np.ndarray
    frequencies: np.ndarray

    @property
    def K(self) -> int:
        return len(self.moduli)

    @cached_property
    def z(self) -> np.ndarray:
        z = self.moduli * np.exp(2j * np.pi * self.frequencies)
        z.setflags(write=False)
        return z

    @property
    def in_closed_disk(self) -> bool:
        return bool(np.all(self.moduli <= 1.0))

    @property
    def equal_modulus(self) -> float | None:
        """The common modulus if all nodes share one, else None."""
        m = self.moduli
        return float(m[0]) if np.all(m == m[0]) else None

    @cached_property
    def stats(self) -> SeparationStats:
        return separation_stats(self)

    def __eq__(self, other):
        if not isinstance(other, NodeSet):
            return NotImplemented
        return np.array_equal(self.moduli, other.moduli) and np.array_equal(
            self.frequencies, other.frequencies
        )

    def __hash__(self):
        return hash((self.moduli.tobytes(), self.frequencies.tobytes()))

    def __repr__(self):
        return f"NodeSet(K={self.K}, moduli={self.moduli.tolist()}, frequencies={self.frequencies.tolist()})"


def make_node_set(moduli, frequencies, *, strict_disk: bool = True) -> NodeSet:
    """Validate and build a :class:`NodeSet`.

    Frequencies are reduced modulo 1. Moduli must lie in (0, 1]; passing
    ``strict_disk=False`` lifts the upper limit, which only the
    infinity-norm bounds accept.
    """
    m = np.atleast_1d(np.asarray(moduli, dtype=float))
    f = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if m.ndim != 1 or f.ndim != 1 or len(m) != len(f):
        raise DomainError(f"moduli and frequencies must be 1-D of equal length, got {m.shape} and {f.shape}")
    if len(m) == 0:
        raise DomainError("at least one node is required")
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(f))):
        raise DomainError("moduli and frequencies must be finite")
    if np.any(m <= 0):
        raise DomainError("moduli must be strictly positive")
    if strict_disk and np.any(m > 1):
        raise DomainError("moduli must not exceed 1 (pass strict_disk=False for general nodes)")
    f = reduce_frequency(f)
    _reject_duplicates(m, f)
    return NodeSet(_frozen(m), _frozen(f))


# coincidence tolerance: reduction modulo 1 can move a frequency by a few ulps
_SAME = 8 * np.finfo(float).eps


def _reject_duplicates(m, f):
    same_f = wrap_distance(f[:, None] - f[None, :]) <= _SAME
    same_m = np.abs(m[:, None] - m[None, :]) <= _SAME * np.maximum(m[:, None], m[None, :])
    hit = np.argwhere(np.triu(same_f & same_m, k=1))
    if len(hit):
        i, j = hit[0]
        raise DuplicateNode(f"nodes {i} and {j} coincide (modulus={m[i]}, frequency={f[i]})")


def separation_stats(nodes: NodeSet) -> SeparationStats:
    """Wrap-around and Euclidean separation statistics of a node set."""
    K = nodes.K
    if K < 2:
        raise NeedTwoNodes("separation statistics need at least two nodes")
    xi = nodes.frequencies
    order = np.argsort(xi, kind="stable")
    s = xi[order]
    # gap[i] is the wrap distance between sorted neighbours i and i+1 (cyclically)
    gap = wrap_distance(np.roll(s, -1) - s)
    per_sorted = np.minimum(gap, np.roll(gap, 1))
    delta_k = np.empty(K)
    delta_k[order] = per_sorted

    pair_wrap = wrap_distance(xi[:, None] - xi[None, :])
    z = nodes.z
    dist = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(dist, np.inf)
    sigma_k = dist.min(axis=1)
    return SeparationStats(
        delta_wrap_per_node=_frozen(delta_k),
        delta_wrap=float(delta_k.min()),
        delta_wrap_max=float(pair_wrap.max()),
        sigma_euclid=float(sigma_k.min()),
        sigma_euclid_per_node=_frozen(sigma_k),
        a_min=float(nodes.moduli.min()),
        a_max=float(nodes.moduli.max()),
    )


def dft_nodes(K: int) -> NodeSet:
    """The K-th roots of unity, frequencies ``k/K``."""
    if K < 1:
        raise DomainError("K must be at least 1")
    return make_node_set(np.ones(K), np.arange(K) / K)


def van_der_corput(k: int) -> float:
    """Binary digit reversal of ``k`` about the radix point."""
    c, scale = 0.0, 0.5
    while k:
        if k & 1:
            c += scale
        k >>= 1
        scale /= 2
    return c


def van_der_corput_nodes(K: int) -> NodeSet:
    """Unit-modulus nodes at the first K points of the Van der Corput sequence."""
    if K < 1:
        raise DomainError("K must be at least 1")
    return make_node_set(np.ones(K), [van_der_corput(k) for k in range(1, K + 1)])


def equal_modulus_nodes(A: float, frequencies) -> NodeSet:
    f = np.asarray(frequencies, dtype=float)
    return make_node_set(np.full(len(f), float(A)), f)


# ---------------------------------------------------------------- file formats

def _parse_float(text: str, where: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise DomainError(f"{where}: cannot parse {text!r} as a number") from None


def nodes_from_csv(text: str, *, strict_disk: bool = True) -> NodeSet:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows or [c.strip() for c in rows[0]] != ["modulus", "frequency"]:
        raise DomainError("CSV node file must start with the header 'modulus,frequency'")
    m, f = [], []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise DomainError(f"line {i}: expected 2 columns, got {len(row)}")
        m.append(_parse_float(row[0].strip(), f"line {i}"))
        f.append(_parse_float(row[1].strip(), f"line {i}"))
    return make_node_set(m, f, strict_disk=strict_disk)


def nodes_to_csv(nodes: NodeSet) -> str:
    lines = ["modulus,frequency"]
    lines += [f"{m!r},{f!r}" for m, f in zip(nodes.moduli.tolist(), nodes.frequencies.tolist())]
    return "\n".join(lines) + "\n"


def nodes_from_json(text: str, *, strict_disk: bool = True) -> NodeSet:
    try:
        doc = json.loads(text)
        items = doc["nodes"]
        m = [float(it["modulus"]) for it in items]
        f = [float(it["frequency"]) for it in items]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed JSON node file: {exc}") from None
    return make_node_set(m, f, strict_disk=strict_disk)


def nodes_to_json(nodes: NodeSet) -> str:
    items = [
        {"modulus": m, "frequency": f}
        for m, f in zip(nodes.moduli.tolist(), nodes.frequencies.tolist())
    ]
    return json.dumps({"nodes": items}) + "\n"


def load_nodes(path, *, strict_disk: bool = True) -> NodeSet:
    """Read a node file, choosing the format from the extension (``.json`` or CSV)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DomainError(f"{path}: {exc.strerror}") from None
    if path.suffix.lower() == ".json":
        return nodes_from_json(text, strict_disk=strict_disk)
    return nodes_from_csv(text, strict_disk=strict_disk)


def save_nodes(nodes: NodeSet, path) -> None:
    path = Path(path)
    text = nodes_to_json(nodes) if path.suffix.lower() == ".json" else nodes_to_csv(nodes)
    path.write_text(text)


def min_unit_circle_sigma(delta_wrap: float) -> float:
    """Euclidean distance between unit-circle nodes whose frequencies differ by ``delta_wrap``."""
    return 2.0 * math.sin(math.pi * delta_wrap)
