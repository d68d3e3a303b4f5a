"""Command-line front end: dataset dumps, theory tables, empirical-vs-theory
comparison reports, and identity audits, with reproducible file outputs.

Determinism contract: given the same flags, every data output is
byte-identical across runs and across --workers values. All floats are
written with 17 significant digits; reductions that feed file output are
either exact integer arithmetic or exactly-rounded float sums in a fixed
order. Wall-clock timings go to stderr only, never into output files.

Exit codes: 0 success; 2 invalid flags or values; 3 a sizing/budget
refusal; 4 quadrature non-convergence. Failures print a single
machine-readable JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    FareyCorrError,
    InputValidationError,
    SizingError,
)
from .farey import farey_sequence
from .numtheory import build_sieves, farey_cardinality
from .spacing import (
    BoxRegion,
    empirical_correlation,
    pair_correlation_histogram,
)
from .theory import (
    PI_SQUARED,
    g2,
    g2_asymptotic_diagnostic,
    g2_integral,
    g_reference,
    monte_carlo_term_area,
    nu_level_measure,
    weighted_totient_log_sum,
)
from .expsum import farey_exponential_sum_direct, farey_exponential_sum_identity

DEFAULT_SEED = 1729

_COMMANDS = (
    "farey-dump",
    "g2-table",
    "nu-level",
    "empirical",
    "compare",
    "expsum-check",
    "asymptotic",
)

_EXIT_INVALID = 2
_EXIT_SIZING = 3
_EXIT_NO_CONVERGENCE = 4


@dataclass
class RunConfig:
    """Validated flag set for one CLI invocation."""

    command: str
    Q: int | None = None
    nu: int = 2
    lambda_max: float | None = None
    bins: int = 12
    box: tuple[tuple[float, float], ...] | None = None
    tol: float = 1e-3
    mc_samples: int = 0
    seed: int = DEFAULT_SEED
    workers: int = 1
    output_path: str | None = None
    format: str | None = None
    r_max: int | None = None
    plot_path: str | None = None


@dataclass
class CorrelationReport:
    """Empirical-vs-theory comparison on a common grid."""

    order: int
    n_points: int
    nu: int
    bin_edges: list[float]
    empirical: list[float]
    theoretical: list[float]
    abs_deviation: list[float] = field(default_factory=list)
    rel_deviation: list[float] = field(default_factory=list)
    max_deviation: float = 0.0
    wall_time: float = 0.0

    def __post_init__(self) -> None:
        if len(self.empirical) != len(self.theoretical):
            raise InputValidationError("empirical/theoretical length mismatch")
        self.abs_deviation = [
            abs(e - t) for e, t in zip(self.empirical, self.theoretical)
        ]
        self.rel_deviation = [
            _relative(a, t) for a, t in zip(self.abs_deviation, self.theoretical)
        ]
        self.max_deviation = max(self.abs_deviation, default=0.0)


def _relative(abs_dev: float, reference: float) -> float:
    if abs_dev == 0.0:
        return 0.0
    if reference == 0.0:
        return math.inf
    return abs_dev / reference


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _json_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            f'{pad}  {json.dumps(str(k))}: {_json_text(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{pad}  {_json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj) if math.isfinite(obj) else "null"
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header: str, rows) -> str:
    return "\n".join([header, *(",".join(r) for r in rows)]) + "\n"


def _parse_box(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for axis in text.split(","):
        parts = axis.split(":")
        if len(parts) != 2:
            raise InputValidationError(
                f"box axis {axis!r} is not of the form lo:hi"
            )
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise InputValidationError(f"box axis {axis!r}: {exc}") from None
        out.append((lo, hi))
    return tuple(out)


class _Parser(argparse.ArgumentParser):
    """argparse that fails with the machine-readable JSON contract."""

    def error(self, message: str) -> None:  # type: ignore[override]
        _print_error("InvalidArguments", message, _EXIT_INVALID)
        raise SystemExit(_EXIT_INVALID)


def _print_error(kind: str, message: str, code: int, **extra) -> None:
    payload = {"error": kind, "message": message, "exit_code": code, **extra}
    sys.stderr.write(_json_text(payload) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fareycorr",
        description="Correlation statistics of Farey fractions: data dumps, "
        "limiting-theory tables, empirical comparisons, identity audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name: str, help_: str, *flags: str):
        p = sub.add_parser(name, help=help_)
        for flag in flags:
            if flag == "Q":
                p.add_argument("--Q", type=int, help="Farey order")
            elif flag == "nu":
                p.add_argument("--nu", type=int, default=2, help="tuple length (default 2)")
            elif flag == "lambda-max":
                p.add_argument("--lambda-max", dest="lambda_max", type=float,
                               help="upper end of the scaled-gap range")
            elif flag == "bins":
                p.add_argument("--bins", type=int, default=12,
                               help="number of grid points / histogram bins (default 12)")
            elif flag == "box":
                p.add_argument("--box", type=str,
                               help="comma-separated lo:hi pairs, one per axis")
            elif flag == "tol":
                p.add_argument("--tol", type=float, default=1e-3,
                               help="absolute error budget (default 1e-3)")
            elif flag == "mc-samples":
                p.add_argument("--mc-samples", dest="mc_samples", type=int, default=0,
                               help="per-term Monte-Carlo cross-check samples (0 = off)")
            elif flag == "seed":
                p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                               help=f"RNG seed (default {DEFAULT_SEED})")
            elif flag == "workers":
                p.add_argument("--workers", type=int, default=1,
                               help="process count; never changes output bytes (default 1)")
            elif flag == "out":
                p.add_argument("--out", dest="output_path", type=str,
                               help="output file (default stdout)")
            elif flag == "format":
                p.add_argument("--format", choices=("csv", "json"),
                               help="output format (default depends on command)")
            elif flag == "r-max":
                p.add_argument("--r-max", dest="r_max", type=int,
                               help="sweep frequencies 1..r-max and their negatives (default Q)")
            elif flag == "plot":
                p.add_argument("--plot", dest="plot_path", type=str,
                               help="also render a figure to this file")
        return p

    cmd("farey-dump", "write all fractions of a Farey sequence",
        "Q", "out", "format")
    cmd("g2-table", "tabulate the limiting pair density and reference curves",
        "lambda-max", "bins", "out", "format", "plot")
    cmd("nu-level", "evaluate the limiting nu-level measure of a box",
        "nu", "box", "tol", "mc-samples", "seed", "workers", "out", "format")
    cmd("empirical", "empirical correlation of a Farey sequence (box or histogram)",
        "Q", "nu", "box", "lambda-max", "bins", "workers", "out", "format", "plot")
    cmd("compare", "empirical pair histogram vs limiting bin averages",
        "Q", "lambda-max", "bins", "workers", "out", "format", "plot")
    cmd("expsum-check", "audit the exponential-sum divisor identity over (Q, r)",
        "Q", "r-max", "workers", "out", "format")
    cmd("asymptotic", "large-argument diagnostics: density ladder and log-sum ratio",
        "lambda-max", "out", "format", "plot")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    box = _parse_box(ns.box) if getattr(ns, "box", None) else None
    cfg = RunConfig(command=ns.command, box=box)
    for name in ("Q", "nu", "lambda_max", "bins", "tol", "mc_samples", "seed",
                 "workers", "output_path", "format", "r_max", "plot_path"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.command not in _COMMANDS:
        raise InputValidationError(f"unknown command {cfg.command!r}")
    if cfg.Q is not None and cfg.Q < 1:
        raise InputValidationError(f"--Q must be >= 1, got {cfg.Q}")
    if cfg.nu < 2:
        raise InputValidationError(f"--nu must be >= 2, got {cfg.nu}")
    if cfg.lambda_max is not None and not (
        cfg.lambda_max > 0 and math.isfinite(cfg.lambda_max)
    ):
        raise InputValidationError(f"--lambda-max must be positive, got {cfg.lambda_max}")
    if cfg.bins < 1:
        raise InputValidationError(f"--bins must be >= 1, got {cfg.bins}")
    if not (cfg.tol > 0 and math.isfinite(cfg.tol)):
        raise InputValidationError(f"--tol must be positive, got {cfg.tol}")
    if cfg.mc_samples < 0:
        raise InputValidationError(f"--mc-samples must be >= 0, got {cfg.mc_samples}")
    if cfg.workers < 1:
        raise InputValidationError(f"--workers must be >= 1, got {cfg.workers}")
    if cfg.r_max is not None and cfg.r_max < 1:
        raise InputValidationError(f"--r-max must be >= 1, got {cfg.r_max}")


def _require(cfg: RunConfig, **fields) -> None:
    for name, value in fields.items():
        if value is None:
            flag = "--" + name.replace("_", "-")
            raise InputValidationError(f"{cfg.command} requires {flag}")


def _sieve_for_lambda(lambda_max: float):
    return build_sieves(max(1, math.ceil(PI_SQUARED * lambda_max / 3.0)))


# ---------------------------------------------------------------- commands


def _run_farey_dump(cfg: RunConfig) -> None:
    _require(cfg, Q=cfg.Q)
    seq = farey_sequence(cfg.Q)
    fmt = cfg.format or "csv"
    if fmt == "csv":
        rows = (
            (str(a), str(q), _fmt(a / q))
            for a, q in zip(seq.numerators.tolist(), seq.denominators.tolist())
        )
        _emit(_csv("a,q,value", rows), cfg.output_path)
    else:
        payload = {
            "order": seq.order,
            "count": len(seq),
            "fractions": [
                [int(a), int(q), a / q]
                for a, q in zip(seq.numerators.tolist(), seq.denominators.tolist())
            ],
        }
        _emit(_json_text(payload) + "\n", cfg.output_path)


def _run_g2_table(cfg: RunConfig) -> None:
    _require(cfg, lambda_max=cfg.lambda_max)
    tables = _sieve_for_lambda(cfg.lambda_max)
    lams = [i * cfg.lambda_max / cfg.bins for i in range(1, cfg.bins + 1)]
    g2_vals = [g2(tables, lam) for lam in lams]
    gue_vals = [g_reference("gue", lam) for lam in lams]
    poisson_vals = [g_reference("poisson", lam) for lam in lams]
    fmt = cfg.format or "csv"
    if fmt == "csv":
        rows = (
            (_fmt(lam), _fmt(gv), _fmt(ge), _fmt(gp))
            for lam, gv, ge, gp in zip(lams, g2_vals, gue_vals, poisson_vals)
        )
        _emit(_csv("lambda,g2,g_gue,g_poisson", rows), cfg.output_path)
    else:
        payload = {
            "lambda_max": cfg.lambda_max,
            "bins": cfg.bins,
            "rows": [
                {"lambda": lam, "g2": gv, "g_gue": ge, "g_poisson": gp}
                for lam, gv, ge, gp in zip(lams, g2_vals, gue_vals, poisson_vals)
            ],
        }
        _emit(_json_text(payload) + "\n", cfg.output_path)
    if cfg.plot_path:
        from . import plotting

        plotting.plot_density_curves(lams, g2_vals, gue_vals, poisson_vals, cfg.plot_path)


def _run_nu_level(cfg: RunConfig) -> None:
    _require(cfg, box=cfg.box)
    if len(cfg.box) != cfg.nu - 1:
        raise InputValidationError(
            f"--box needs {cfg.nu - 1} axes for --nu {cfg.nu}, got {len(cfg.box)}"
        )
    box = BoxRegion(nu=cfg.nu, intervals=cfg.box)
    result = nu_level_measure(cfg.nu, box, cfg.tol, workers=cfg.workers)
    payload = {
        "nu": result.nu,
        "box": [[lo, hi] for lo, hi in box.intervals],
        "value": result.value,
        "error_bound": result.error_bound,
        "term_count": result.term_count,
        "tol": result.tol,
    }
    if cfg.mc_samples > 0:
        from .theory import enumerate_terms

        scale = max(hi for _, hi in box.intervals)
        terms = enumerate_terms(cfg.nu, scale, box)
        estimates = [
            monte_carlo_term_area(t, box, cfg.mc_samples, cfg.seed + i)
            for i, t in enumerate(terms)
        ]
        payload["monte_carlo"] = {
            "samples_per_term": cfg.mc_samples,
            "seed": cfg.seed,
            "value": 2.0 * math.fsum(e.value for e in estimates),
            "std_error": 2.0 * math.sqrt(math.fsum(e.std_error**2 for e in estimates)),
        }
    fmt = cfg.format or "json"
    if fmt == "json":
        _emit(_json_text(payload) + "\n", cfg.output_path)
    else:
        rows = [(str(result.nu), _fmt(result.value), _fmt(result.error_bound),
                 str(result.term_count), _fmt(result.tol))]
        _emit(_csv("nu,value,error_bound,term_count,tol", rows), cfg.output_path)


def _run_empirical(cfg: RunConfig) -> None:
    _require(cfg, Q=cfg.Q)
    points = farey_sequence(cfg.Q).unit_points()
    if cfg.box is not None:
        if len(cfg.box) != cfg.nu - 1:
            raise InputValidationError(
                f"--box needs {cfg.nu - 1} axes for --nu {cfg.nu}, got {len(cfg.box)}"
            )
        box = BoxRegion(nu=cfg.nu, intervals=cfg.box)
        est = empirical_correlation(points, cfg.nu, box, workers=cfg.workers)
        fmt = cfg.format or "json"
        if fmt == "json":
            payload = {
                "order": cfg.Q,
                "nu": est.nu,
                "box": [[lo, hi] for lo, hi in box.intervals],
                "n_points": est.n_points,
                "tuple_count": est.tuple_count,
                "value": est.value,
            }
            _emit(_json_text(payload) + "\n", cfg.output_path)
        else:
            rows = [(str(est.nu), str(est.n_points), str(est.tuple_count), _fmt(est.value))]
            _emit(_csv("nu,n_points,tuple_count,value", rows), cfg.output_path)
        return
    if cfg.lambda_max is None:
        raise InputValidationError("empirical requires --box or --lambda-max")
    if cfg.nu != 2:
        raise InputValidationError("histogram mode is pair correlation; use --nu 2 or pass --box")
    hist = pair_correlation_histogram(points, cfg.lambda_max, cfg.bins, workers=cfg.workers)
    fmt = cfg.format or "csv"
    if fmt == "csv":
        rows = (
            (_fmt(hist.bin_edges[i]), _fmt(hist.bin_edges[i + 1]),
             _fmt(hist.densities[i]), str(int(hist.counts[i])))
            for i in range(hist.bins)
        )
        _emit(_csv("bin_lo,bin_hi,density,count", rows), cfg.output_path)
    else:
        payload = {
            "order": cfg.Q,
            "n_points": hist.n_points,
            "lambda_max": hist.lambda_max,
            "bins": hist.bins,
            "rows": [
                {
                    "bin_lo": float(hist.bin_edges[i]),
                    "bin_hi": float(hist.bin_edges[i + 1]),
                    "density": float(hist.densities[i]),
                    "count": int(hist.counts[i]),
                }
                for i in range(hist.bins)
            ],
        }
        _emit(_json_text(payload) + "\n", cfg.output_path)
    if cfg.plot_path:
        from . import plotting

        plotting.plot_histogram(
            hist.bin_edges.tolist(), hist.densities.tolist(), cfg.plot_path
        )


def _run_compare(cfg: RunConfig) -> CorrelationReport:
    _require(cfg, Q=cfg.Q, lambda_max=cfg.lambda_max)
    points = farey_sequence(cfg.Q).unit_points()
    hist = pair_correlation_histogram(points, cfg.lambda_max, cfg.bins, workers=cfg.workers)
    tables = _sieve_for_lambda(cfg.lambda_max)
    delta = cfg.lambda_max / cfg.bins
    theoretical = [
        g2_integral(tables, float(hist.bin_edges[i]), float(hist.bin_edges[i + 1])) / delta
        for i in range(hist.bins)
    ]
    report = CorrelationReport(
        order=cfg.Q,
        n_points=hist.n_points,
        nu=2,
        bin_edges=[float(e) for e in hist.bin_edges],
        empirical=[float(v) for v in hist.densities],
        theoretical=theoretical,
    )
    fmt = cfg.format or "csv"
    if fmt == "csv":
        rows = (
            (_fmt(report.bin_edges[i]), _fmt(report.bin_edges[i + 1]),
             _fmt(report.empirical[i]), _fmt(report.theoretical[i]),
             _fmt(report.abs_deviation[i]), _fmt(report.rel_deviation[i]))
            for i in range(hist.bins)
        )
        _emit(
            _csv("bin_lo,bin_hi,empirical,theoretical,abs_deviation,rel_deviation", rows),
            cfg.output_path,
        )
    else:
        payload = {
            "order": report.order,
            "n_points": report.n_points,
            "nu": report.nu,
            "bin_edges": report.bin_edges,
            "empirical": report.empirical,
            "theoretical": report.theoretical,
            "abs_deviation": report.abs_deviation,
            "rel_deviation": report.rel_deviation,
            "max_deviation": report.max_deviation,
        }
        _emit(_json_text(payload) + "\n", cfg.output_path)
    if cfg.plot_path:
        from . import plotting

        plotting.plot_compare(
            report.bin_edges, report.empirical, report.theoretical, cfg.plot_path
        )
    return report


def _run_expsum_check(cfg: RunConfig) -> None:
    _require(cfg, Q=cfg.Q)
    r_max = cfg.r_max if cfg.r_max is not None else cfg.Q
    tables = build_sieves(cfg.Q)
    rows = []
    max_err = 0.0
    for order in range(1, cfg.Q + 1):
        seq = farey_sequence(order)
        for r in [*range(-r_max, 0), *range(1, r_max + 1)]:
            direct = farey_exponential_sum_direct(seq, r)
            ident = farey_exponential_sum_identity(tables, order, r)
            err = abs(direct - ident)
            max_err = max(max_err, err)
            rows.append((str(order), str(r), _fmt(direct.real), _fmt(direct.imag),
                         str(ident), _fmt(err)))
    fmt = cfg.format or "csv"
    if fmt == "csv":
        _emit(_csv("Q,r,direct_re,direct_im,identity,abs_error", rows), cfg.output_path)
    else:
        payload = {
            "Q_max": cfg.Q,
            "r_max": r_max,
            "max_abs_error": max_err,
            "rows": [
                {"Q": int(r[0]), "r": int(r[1]), "direct_re": float(r[2]),
                 "direct_im": float(r[3]), "identity": int(r[4]),
                 "abs_error": float(r[5])}
                for r in rows
            ],
        }
        _emit(_json_text(payload) + "\n", cfg.output_path)


def _run_asymptotic(cfg: RunConfig) -> None:
    lambda_max = cfg.lambda_max if cfg.lambda_max is not None else 1e4
    if lambda_max < 10:
        raise InputValidationError("asymptotic needs --lambda-max >= 10")
    ladder = []
    lam = 10.0
    while lam <= lambda_max:
        ladder.append(lam)
        lam *= 10.0
    limit = max(math.ceil(PI_SQUARED * lambda_max / 3.0), math.ceil(lambda_max))
    tables = build_sieves(limit)
    diag = g2_asymptotic_diagnostic(tables, ladder)
    g2_vals = [g2(tables, lam) for lam in ladder]
    x = float(lambda_max)
    s_val = weighted_totient_log_sum(tables, x)
    main = 3.0 * x * x / (2.0 * PI_SQUARED)
    fmt = cfg.format or "json"
    if fmt == "json":
        payload = {
            "ladder": [
                {"lambda": lam, "g2": gv, "abs_deviation": abs(gv - 1.0),
                 "scaled_deviation": sd}
                for (lam, sd), gv in zip(diag, g2_vals)
            ],
            "weighted_log_sum": {
                "x": x,
                "value": s_val,
                "main_term": main,
                "ratio": s_val / main,
            },
        }
        _emit(_json_text(payload) + "\n", cfg.output_path)
    else:
        rows = (
            (_fmt(lam), _fmt(gv), _fmt(abs(gv - 1.0)), _fmt(sd))
            for (lam, sd), gv in zip(diag, g2_vals)
        )
        _emit(_csv("lambda,g2,abs_deviation,scaled_deviation", rows), cfg.output_path)
    if cfg.plot_path:
        from . import plotting

        plotting.plot_asymptotic([d[0] for d in diag], [d[1] for d in diag], cfg.plot_path)


def execute(config: RunConfig) -> CorrelationReport | None:
    """Run one validated configuration; returns the report for `compare`."""
    _validate(config)
    runner = {
        "farey-dump": _run_farey_dump,
        "g2-table": _run_g2_table,
        "nu-level": _run_nu_level,
        "empirical": _run_empirical,
        "compare": _run_compare,
        "expsum-check": _run_expsum_check,
        "asymptotic": _run_asymptotic,
    }[config.command]
    return runner(config)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        report = execute(config)
    except InputValidationError as exc:
        _print_error("InputValidationError", str(exc), _EXIT_INVALID)
        return _EXIT_INVALID
    except SizingError as exc:
        _print_error("SizingError", str(exc), _EXIT_SIZING)
        return _EXIT_SIZING
    except ConvergenceError as exc:
        _print_error(
            "ConvergenceError", str(exc), _EXIT_NO_CONVERGENCE,
            lower=exc.lower, upper=exc.upper,
        )
        return _EXIT_NO_CONVERGENCE
    except FareyCorrError as exc:
        _print_error(type(exc).__name__, str(exc), _EXIT_INVALID)
        return _EXIT_INVALID
    elapsed = time.perf_counter() - start
    if report is not None:
        report.wall_time = elapsed
    sys.stderr.write(f"wall-time: {elapsed:.3f}s\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
