"""Monte-Carlo comparison of condition numbers and bounds for equal-modulus nodes.

Each trial draws K and frequencies with guaranteed wrap-around separation d,
then sweeps the common modulus A over a grid. Every trial has its own
Philox stream keyed by ``(seed, d, trial)``, so results do not depend on
evaluation order or thread count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .bazan import bazan_bounds
from .bounds_disk import disk_inputs, disk_kappa_report, equal_modulus_kappa_bound
from .errors import DomainError, RankDeficient
from .matrix import RANK_TOL, VandermondeSpec, extremal_singular_values
from .nodes import equal_modulus_nodes

KAPPA_CURVE = "conditionNumber"
BOUND_NAMES = ("ourBound", "bazan", "diskGeneral")
DEFAULT_BOUNDS = ("ourBound", "bazan")
# largest condition number the Gram route can resolve before flagging rank deficiency
KAPPA_CEILING = 1 / math.sqrt(RANK_TOL)


def a_grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Inclusive grid ``lo, lo+step, ..., hi`` rounded to 12 decimals."""
    if not (0 < lo <= hi <= 1) or not step > 0:
        raise DomainError(f"need 0 < lo <= hi <= 1 and step > 0, got {lo}:{hi}:{step}")
    n = int(round((hi - lo) / step)) + 1
    return tuple(round(lo + i * step, 12) for i in range(n) if lo + i * step <= hi + 1e-12)


def parse_a_grid(text: str) -> tuple[float, ...]:
    """Parse ``lo:hi:step``."""
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise DomainError(f"A grid must look like lo:hi:step, got {text!r}") from None
    return a_grid(lo, hi, step)


@dataclass(frozen=True)
class ExperimentConfig:
    d: float
    N: int = 100
    trials: int = 500
    a_grid: tuple[float, ...] = field(default_factory=lambda: a_grid(0.1, 1.0, 0.02))
    seed: int = 0
    bounds_selected: tuple[str, ...] = DEFAULT_BOUNDS
    resample_per_a: bool = False
    use_floor_d: bool = False

    def __post_init__(self):
        if not 0 < self.d <= 0.5:
            raise DomainError(f"d must lie in (0, 0.5], got {self.d}")
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if self.N < 1:
            raise DomainError("N must be at least 1")
        grid = tuple(float(a) for a in self.a_grid)
        if not grid or any(not 0 < a <= 1 for a in grid):
            raise DomainError("every A must lie in (0, 1]")
        unknown = set(self.bounds_selected) - set(BOUND_NAMES)
        if unknown:
            raise DomainError(f"unknown bounds {sorted(unknown)}; choose from {BOUND_NAMES}")
        object.__setattr__(self, "a_grid", tuple(sorted(grid)))
        object.__setattr__(self, "bounds_selected", tuple(self.bounds_selected))


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    A: float
    K: int
    frequencies: tuple[float, ...]
    realized_delta: float
    kappa_exact: float
    bound_values: dict
    flags: frozenset
    kappa_error: float = 0.0


@dataclass(frozen=True)
class SweepRow:
    A: float
    kappa_mean: float
    bound_means: dict
    invalid_counts: dict
    illcond_count: int
    rankdef_count: int


@dataclass(frozen=True)
class SweepTable:
    config: ExperimentConfig
    rows: tuple[SweepRow, ...]
    records: tuple[TrialRecord, ...] = ()

    def curve(self, name: str) -> np.ndarray:
        if name == KAPPA_CURVE:
            return np.array([r.kappa_mean for r in self.rows])
        return np.array([r.bound_means[name] for r in self.rows])

    @property
    def a_values(self) -> np.ndarray:
        return np.array([r.A for r in self.rows])


def trial_rng(seed: int, d: float, trial: int, a_index: int | None = None) -> np.random.Generator:
    """Counter-based generator (Philox) for one trial."""
    key = [int(seed), int(round(d * 1e6)), int(trial)]
    if a_index is not None:
        key.append(int(a_index) + 1)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def max_K(d: float) -> int:
    return int(math.floor(1 / d + 1e-9))


def sample_configuration(d: float, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Draw K uniformly on {2..floor(1/d)} and frequencies ``k/K + r_k`` with ``r_k ~ U[0, 1/K - d]``."""
    top = max_K(d)
    if not d > 0 or top < 2:
        raise DomainError(f"need floor(1/d) >= 2, got d={d}")
    K = int(rng.integers(2, top + 1))
    r = rng.uniform(0.0, max(0.0, 1 / K - d), K)
    xi = np.arange(1, K + 1) / K + r
    return K, xi - np.floor(xi)


def _evaluate(config: ExperimentConfig, K, xi, A) -> TrialRecord:
    nodes = equal_modulus_nodes(A, xi)
    spec = VandermondeSpec(nodes, config.N)
    realized = nodes.stats.delta_wrap
    delta = config.d if config.use_floor_d else realized
    summary = extremal_singular_values(spec, flag_only=True)
    flags = set()
    kappa = summary.kappa
    if summary.rank_deficient:
        flags.add("rank_deficient")
        kappa = KAPPA_CEILING
    if summary.ill_conditioned:
        flags.add("ill_conditioned")
    values = {}
    for name in config.bounds_selected:
        if name == "ourBound":
            rep = equal_modulus_kappa_bound(config.N, A, delta)
        elif name == "diskGeneral":
            rep = disk_kappa_report(disk_inputs(nodes, config.N))
        else:
            try:
                rep = bazan_bounds(spec)[1]
            except RankDeficient:
                rep = None
        if rep is None or not rep.valid:
            flags.add(f"invalid_{name}")
            values[name] = math.inf
        else:
            values[name] = rep.value
    return TrialRecord(0, A, K, tuple(xi.tolist()), realized, kappa, values, frozenset(flags), summary.kappa_error)


def _run_trial(config: ExperimentConfig, trial: int) -> list[TrialRecord]:
    out = []
    rng = trial_rng(config.seed, config.d, trial)
    K, xi = sample_configuration(config.d, rng)
    for ia, A in enumerate(config.a_grid):
        if config.resample_per_a:
            K, xi = sample_configuration(config.d, trial_rng(config.seed, config.d, trial, ia))
        out.append(replace(_evaluate(config, K, xi, A), trial=trial))
    return out


def thread_count(threads: int | None = None) -> int:
    """Worker count: explicit value, else ``VANDY_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get("VANDY_THREADS", "").strip()
        threads = int(env) if env.isdigit() and int(env) > 0 else 1
    return max(1, int(threads))


def run_sweep(config: ExperimentConfig, threads: int | None = None, keep_records: bool = False) -> SweepTable:
    """Run every trial over the A-grid and average in trial-index order.

    Rank-deficient trials enter the kappa mean at ``KAPPA_CEILING`` (a lower
    estimate of the true value) and are counted. Invalid bound values are
    excluded from that bound's mean and counted.
    """
    n = thread_count(threads)
    if n == 1:
        per_trial = [_run_trial(config, t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            per_trial = list(pool.map(lambda t: _run_trial(config, t), range(config.trials)))

    rows = []
    for ia, A in enumerate(config.a_grid):
        recs = [per_trial[t][ia] for t in range(config.trials)]
        kappas = np.array([r.kappa_exact for r in recs])
        means, invalid = {}, {}
        for name in config.bounds_selected:
            vals = np.array([r.bound_values[name] for r in recs])
            ok = np.isfinite(vals)
            invalid[name] = int(np.count_nonzero(~ok))
            means[name] = float(np.mean(vals[ok])) if ok.any() else math.nan
        rows.append(
            SweepRow(
                A=A,
                kappa_mean=float(np.mean(kappas)),
                bound_means=means,
                invalid_counts=invalid,
                illcond_count=sum("ill_conditioned" in r.flags for r in recs),
                rankdef_count=sum("rank_deficient" in r.flags for r in recs),
            )
        )
    records = tuple(r for trial in per_trial for r in trial) if keep_records else ()
    return SweepTable(config, tuple(rows), records)


# ---------------------------------------------------------------- output files

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _delta_tag(d: float) -> str:
    return f"{100 * d:.10g}"


def dat_filename(curve: str, config: ExperimentConfig) -> str:
    return f"{curve}_N{config.N}_100delta{_delta_tag(config.d)}trials{config.trials}.dat"


def _dat_text(a_values, values) -> str:
    return "".join(f"{_fmt(a)} {_fmt(v)}\n" for a, v in zip(a_values, values))


def _csv_text(table: SweepTable) -> str:
    names = table.config.bounds_selected
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["A", "kappa_mean", *(f"{b}_mean" for b in names), *(f"invalid_{b}" for b in names), "illcond_count"])
    for r in table.rows:
        w.writerow(
            [
                repr(r.A),
                repr(r.kappa_mean),
                *(repr(r.bound_means[b]) for b in names),
                *(r.invalid_counts[b] for b in names),
                r.illcond_count,
            ]
        )
    return buf.getvalue()


def _git_blob_hash(data: bytes) -> str:
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def output_directory(root, d: float) -> Path:
    return Path(root) / f"{d:g}"


def emit_dat(table: SweepTable, directory) -> dict[str, Path]:
    """Write one ``.dat`` file per curve plus ``sweep.csv`` and ``manifest.json``.

    Returns a map from curve name (or ``csv``/``manifest``) to path. The
    manifest carries the configuration and content hashes and no
    timestamps, so identical sweeps produce identical directories.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {directory}: {exc.strerror}") from exc
    cfg = table.config
    a = table.a_values
    files: dict[str, tuple[Path, str]] = {}
    for curve in (KAPPA_CURVE, *cfg.bounds_selected):
        files[curve] = (directory / dat_filename(curve, cfg), _dat_text(a, table.curve(curve)))
    files["csv"] = (directory / "sweep.csv", _csv_text(table))

    blobs = {p.name: _git_blob_hash(text.encode()) for p, text in files.values()}
    combined = hashlib.sha256("".join(f"{k} {v}\n" for k, v in sorted(blobs.items())).encode()).hexdigest()
    manifest = {
        "config": {**asdict(cfg), "a_grid": list(cfg.a_grid), "bounds_selected": list(cfg.bounds_selected)},
        "seed": cfg.seed,
        "rng": "numpy Philox, SeedSequence([seed, round(d*1e6), trial])",
        "files": blobs,
        "content_hash": combined,
    }
    files["manifest"] = (directory / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    out = {}
    for key, (path, text) in files.items():
        try:
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
        out[key] = path
    return out


def parse_dat(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column ``.dat`` file back into ``(A, value)`` arrays."""
    data = np.loadtxt(path, ndmin=2)
    return data[:, 0], data[:, 1]
