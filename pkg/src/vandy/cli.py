"""Command-line entry point.

Exit codes: 0 success, 1 verification violation, 2 usage or domain error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
import warnings

import numpy as np

from . import __version__
from .bazan import bazan_bounds
from .bounds_circle import (
    BoundReport,
    all_circle_bounds,
    bazan_circle_bound,
    ferreira_bound,
    gautschi_inverse_inf_bounds,
    gautschi_kappa_inf_bound,
    improved_circle_bound_v1,
    improved_circle_bound_v2,
    liao_fannjiang_bound,
    selberg_moitra_bound,
)
from .bounds_disk import disk_inputs, disk_kappa_report, equal_modulus_kappa_bound
from .errors import DomainError, IllConditioned, RankDeficient
from .experiments import (
    BOUND_NAMES,
    DEFAULT_BOUNDS,
    ExperimentConfig,
    emit_dat,
    output_directory,
    parse_a_grid,
    run_sweep,
)
from .matrix import VandermondeSpec, extremal_singular_values
from .nodes import (
    NodeSet,
    dft_nodes,
    equal_modulus_nodes,
    load_nodes,
    make_node_set,
    nodes_to_csv,
    nodes_to_json,
    save_nodes,
    van_der_corput_nodes,
)
from .sieve import SUITES, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
FAMILIES = ("all", "circle", "disk", "equal-modulus", "bazan", "gautschi")


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x).__name__)


def _emit_json(obj) -> None:
    print(json.dumps(obj, default=_json_default, allow_nan=True, indent=2))


def _fmt(x) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) else f"{x:.10g}"
    return str(x)


def _table(header, rows) -> None:
    rows = [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def _summary_dict(s) -> dict:
    return {
        "sigma_min": s.sigma_min,
        "sigma_max": s.sigma_max,
        "kappa": s.kappa,
        "eig_residual": s.eig_residual,
        "gram_cond_estimate": s.gram_cond_estimate,
        "rank_deficient": s.rank_deficient,
        "ill_conditioned": s.ill_conditioned,
    }


# ---------------------------------------------------------------- bound

def bound_reports_for_nodes(nodes: NodeSet, N: int, family: str) -> tuple[list[BoundReport], list[str]]:
    """Evaluate the requested bound families on a node set; also return notes on skipped families."""
    reports, notes = [], []
    want = (lambda f: family in ("all", f))
    on_circle = bool(np.all(nodes.moduli == 1.0))
    A = nodes.equal_modulus
    if want("circle"):
        if on_circle and nodes.K >= 2:
            reports += all_circle_bounds(N, nodes)
        else:
            notes.append("circle: needs at least two unit-modulus nodes")
    if want("disk"):
        if nodes.K >= 2 and nodes.in_closed_disk:
            reports.append(disk_kappa_report(disk_inputs(nodes, N)))
        else:
            notes.append("disk: needs at least two nodes in the closed disk")
    if want("equal-modulus"):
        if A is not None and nodes.K >= 2:
            reports.append(equal_modulus_kappa_bound(N, A, nodes.stats.delta_wrap))
        else:
            notes.append("equal-modulus: nodes do not share a modulus")
    if want("bazan"):
        if nodes.K >= 2 and nodes.in_closed_disk:
            lower, upper = bazan_bounds(VandermondeSpec(nodes, N))
            reports.append(BoundReport("bazan_lower", lower, True, math.inf, {}))
            reports.append(upper)
        else:
            notes.append("bazan: needs at least two nodes in the closed disk")
    if want("gautschi"):
        if nodes.K >= 2:
            lo, hi = gautschi_inverse_inf_bounds(nodes)
            echo = {"K": nodes.K}
            reports.append(BoundReport("gautschi_inverse_inf_lower", lo, True, math.inf, echo))
            reports.append(BoundReport("gautschi_inverse_inf_upper", hi, True, math.inf, echo))
            reports.append(BoundReport("gautschi_kappa_inf", gautschi_kappa_inf_bound(nodes), True, math.inf, echo))
        else:
            notes.append("gautschi: needs at least two nodes")
    return reports, notes


def bound_reports_for_scalars(args) -> list[BoundReport]:
    N, fam = args.n, args.family
    if args.delta is None:
        raise DomainError("scalar mode needs --delta (and --n)")
    reports = []
    if fam in ("all", "circle"):
        reports += [
            selberg_moitra_bound(N, args.delta),
            improved_circle_bound_v1(N, args.delta),
            improved_circle_bound_v2(N, args.delta),
            liao_fannjiang_bound(N, args.delta),
        ]
        if args.delta_max is not None:
            reports.append(ferreira_bound(N, args.delta, args.delta_max))
        if args.k is not None and args.sigma is not None:
            reports.append(bazan_circle_bound(N, args.k, args.sigma))
    if fam in ("all", "equal-modulus"):
        if args.a is None:
            if fam == "equal-modulus":
                raise DomainError("equal-modulus family needs --A")
        else:
            reports.append(equal_modulus_kappa_bound(N, args.a, args.delta))
    if fam in ("disk", "bazan", "gautschi"):
        raise DomainError(f"family {fam!r} needs a node file")
    return reports


def cmd_bound(args) -> int:
    out = {}
    if args.nodes:
        nodes = load_nodes(args.nodes, strict_disk=args.family != "gautschi")
        N = args.n or nodes.K
        if N >= nodes.K and nodes.in_closed_disk:
            out["exact"] = _summary_dict(extremal_singular_values(VandermondeSpec(nodes, N), flag_only=True))
        reports, notes = bound_reports_for_nodes(nodes, N, args.family)
        out.update(N=N, K=nodes.K, notes=notes)
    else:
        if args.n is None:
            raise DomainError("give a node file or --n with scalar inputs")
        reports = bound_reports_for_scalars(args)
        out["N"] = args.n
    out["bounds"] = [r.as_dict() for r in reports]
    if args.json:
        _emit_json(out)
        return EXIT_OK
    if "exact" in out:
        e = out["exact"]
        print(f"exact: sigma_min={_fmt(e['sigma_min'])} sigma_max={_fmt(e['sigma_max'])} kappa={_fmt(e['kappa'])}")
    _table(["bound", "value", "valid", "margin"], [[r.name, r.value, r.valid, r.margin] for r in reports])
    for note in out.get("notes", []):
        print(f"skipped {note}")
    return EXIT_OK


# ---------------------------------------------------------------- exact

def cmd_exact(args) -> int:
    nodes = load_nodes(args.nodes_file)
    N = args.n or nodes.K
    spec = VandermondeSpec(nodes, N)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditioned)
        try:
            s = extremal_singular_values(spec)
        except RankDeficient as exc:
            payload = {"error": "RankDeficient", "message": str(exc)}
            if exc.summary is not None:
                payload["summary"] = _summary_dict(exc.summary)
            if args.json:
                _emit_json(payload)
            else:
                print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
    warn = [str(w.message) for w in caught]
    if s.ill_conditioned:
        warn.append(f"Gram condition estimate {s.gram_cond_estimate:.3e} above 1e12; sigma_min has reduced accuracy")
    out = {"N": N, "K": nodes.K, **_summary_dict(s), "warnings": warn}
    if args.json:
        _emit_json(out)
    else:
        for key in ("N", "K", "sigma_min", "sigma_max", "kappa", "eig_residual", "gram_cond_estimate"):
            print(f"{key}: {_fmt(out[key])}")
        for w in warn:
            print(f"warning: {w}")
    return EXIT_OK


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    if args.trials < 1:
        raise DomainError("--trials must be at least 1")
    t0 = time.perf_counter()
    results = run_suite(args.suite, args.trials, args.seed)
    elapsed = time.perf_counter() - t0
    violations = sum(r.violations for r in results)
    if args.json:
        _emit_json(
            {
                "suite": args.suite,
                "seed": args.seed,
                "trials": args.trials,
                "violations": violations,
                "checks": [r.__dict__ for r in results],
            }
        )
    else:
        print(f"suite={args.suite} seed={args.seed} trials={args.trials} ({elapsed:.1f} s)")
        _table(["check", "trials", "violations", "min_slack"], [[r.name, r.trials, r.violations, r.min_slack] for r in results])
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------- experiment

def cmd_experiment(args) -> int:
    grid = parse_a_grid(args.a_grid)
    bounds = tuple(b for b in args.bounds.split(",") if b)
    summaries = []
    for d in args.d:
        cfg = ExperimentConfig(
            d=d,
            N=args.n,
            trials=args.trials,
            a_grid=grid,
            seed=args.seed,
            bounds_selected=bounds,
            resample_per_a=args.resample_per_a,
            use_floor_d=args.floor_d,
        )
        t0 = time.perf_counter()
        table = run_sweep(cfg, threads=args.threads)
        paths = emit_dat(table, output_directory(args.out, d))
        manifest = json.loads(paths["manifest"].read_text())
        summaries.append(
            {
                "d": d,
                "seed": args.seed,
                "directory": str(paths["manifest"].parent),
                "content_hash": manifest["content_hash"],
                "seconds": round(time.perf_counter() - t0, 3),
                "illcond_total": sum(r.illcond_count for r in table.rows),
            }
        )
    if args.json:
        _emit_json(summaries)
    else:
        for s in summaries:
            print(
                f"d={s['d']} seed={s['seed']} -> {s['directory']} "
                f"hash={s['content_hash'][:16]} ill-conditioned={s['illcond_total']} ({s['seconds']} s)"
            )
    return EXIT_OK


# ---------------------------------------------------------------- nodes

def cmd_nodes(args) -> int:
    if args.kind == "dft":
        nodes = dft_nodes(args.k)
    elif args.kind == "vdc":
        nodes = van_der_corput_nodes(args.k)
    elif args.kind == "equal":
        nodes = equal_modulus_nodes(args.a, np.arange(args.k) / args.k)
    else:
        from .experiments import sample_configuration, trial_rng

        if args.d is None:
            raise DomainError("kind 'sample' needs --d")
        _, xi = sample_configuration(args.d, trial_rng(args.seed, args.d, 0))
        nodes = make_node_set(np.full(len(xi), args.a), xi)
        print(f"# seed={args.seed}", file=sys.stderr)
    if args.out:
        save_nodes(nodes, args.out)
    else:
        sys.stdout.write(nodes_to_json(nodes) if args.format == "json" else nodes_to_csv(nodes))
    if args.stats and nodes.K >= 2:
        st = nodes.stats
        print(
            f"# K={nodes.K} delta_wrap={st.delta_wrap:.10g} delta_wrap_max={st.delta_wrap_max:.10g} "
            f"sigma={st.sigma_euclid:.10g} A_min={st.a_min:.10g} A_max={st.a_max:.10g}",
            file=sys.stderr,
        )
    return EXIT_OK


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vandy", description="Vandermonde conditioning: exact spectra, bounds, checks, sweeps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="evaluate condition-number bounds")
    b.add_argument("--nodes", help="node file (.csv with header modulus,frequency, or .json)")
    b.add_argument("--family", choices=FAMILIES, default="all")
    b.add_argument("--n", type=int, help="row count N (default K with a node file)")
    b.add_argument("--A", dest="a", type=float, help="common modulus (scalar mode)")
    b.add_argument("--delta", type=float, help="wrap-around separation (scalar mode)")
    b.add_argument("--delta-max", type=float, help="maximum pairwise wrap distance (scalar mode, Ferreira)")
    b.add_argument("--K", dest="k", type=int, help="node count (scalar mode, Bazan circle)")
    b.add_argument("--sigma", type=float, help="minimum Euclidean distance (scalar mode, Bazan circle)")
    b.add_argument("--json", action="store_true", help="machine-readable output")
    b.set_defaults(func=cmd_bound)

    e = sub.add_parser("exact", help="exact extremal singular values and kappa")
    e.add_argument("nodes_file", help="node file")
    e.add_argument("--n", type=int, help="row count N (default K)")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_exact)

    v = sub.add_parser("verify", help="random checks of the Hilbert-type and sieve inequalities")
    v.add_argument("--suite", choices=sorted(SUITES), default="all")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("experiment", help="Monte-Carlo sweep over the common modulus A")
    x.add_argument("--n", type=int, default=100)
    x.add_argument("--trials", type=int, default=500)
    x.add_argument("--d", type=float, nargs="+", default=[0.05], help="separation floor(s) in (0, 0.5]")
    x.add_argument("--a-grid", default="0.1:1:0.02", help="lo:hi:step, inclusive")
    x.add_argument("--bounds", default=",".join(DEFAULT_BOUNDS), help=f"comma list from {','.join(BOUND_NAMES)}")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--out", default="out")
    x.add_argument("--resample-per-a", action="store_true", help="draw fresh configurations for every A")
    x.add_argument("--floor-d", action="store_true", help="evaluate bounds at d instead of the realized separation")
    x.add_argument("--threads", type=int, help="worker threads (default VANDY_THREADS or 1)")
    x.add_argument("--json", action="store_true")
    x.set_defaults(func=cmd_experiment)

    nd = sub.add_parser("nodes", help="generate node files")
    nd.add_argument("kind", choices=("dft", "vdc", "equal", "sample"))
    nd.add_argument("--K", dest="k", type=int, default=4)
    nd.add_argument("--A", dest="a", type=float, default=1.0)
    nd.add_argument("--d", type=float)
    nd.add_argument("--seed", type=int, default=0)
    nd.add_argument("--format", choices=("csv", "json"), default="csv")
    nd.add_argument("--out", help="write to a file (format from extension)")
    nd.add_argument("--stats", action="store_true", help="print separation statistics to stderr")
    nd.set_defaults(func=cmd_nodes)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankDeficient as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
