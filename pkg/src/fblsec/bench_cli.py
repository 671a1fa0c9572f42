"""Command-line front end and experiment harness.

Subcommands
-----------
solve     one scenario, one method, JSON report on stdout
converge  per-iteration LFP traces as CSV, with the enumeration optimum
          as a constant benchmark series
sweep     grid sweep over one scenario field, CSV plus a generated
          matplotlib plot script (log-scale LFP against the swept value)
validate  Monte-Carlo check of the analytic LFP at a given allocation

Exit codes are uniform across subcommands: 0 success, 1 input error,
2 infeasible.  CSV output is deterministic for fixed inputs (no
timestamps; the wall_time column is informational and excluded from
golden comparisons).  Sweep grid points are evaluated in parallel when
the FBLSEC_THREADS environment variable allows it (absent: all cores),
but rows are always written in grid order.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .fbl_core import DomainError
from .lfp_model import Allocation, link_errors, lfp_value
from .scenario import Scenario, db_to_linear, load_scenario
from .solvers import (
    STATUS_INFEASIBLE,
    SolverConfig,
    solve_bcd,
    solve_exhaustive,
    solve_mm,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2

_METHODS = {
    "exhaustive": solve_exhaustive,
    "bcd": solve_bcd,
    "mm": solve_mm,
}

SWEEP_FIELDS = ("gamma_ab_db", "gamma_ae_db", "gamma_ba_db", "gamma_be_db",
                "M", "tx_power")


@dataclass(frozen=True)
class SweepSpec:
    """One-axis sweep description: which field, the grid, the methods."""

    vary: str
    start: float
    stop: float
    step: float
    methods: tuple

    def __post_init__(self):
        if self.vary not in SWEEP_FIELDS:
            raise DomainError(f"cannot sweep {self.vary!r}; "
                              f"choose one of {SWEEP_FIELDS}")
        if not self.start < self.stop:
            raise DomainError("sweep needs start < stop")
        if self.step <= 0:
            raise DomainError("sweep step must be > 0")
        if not self.methods:
            raise DomainError("sweep needs at least one method")
        for m in self.methods:
            if m not in _METHODS:
                raise DomainError(f"unknown method {m!r}")

    def values(self):
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        vals = [self.start + i * self.step for i in range(n + 1)]
        if self.vary == "M":
            vals = [float(int(round(v))) for v in vals]
        return vals


RESULT_COLUMNS = ("vary", "value", "method", "status", "lfp", "m1", "m2",
                  "d_r1", "d_r2", "iterations", "evaluations", "wall_time",
                  "lfp_ibl")


def apply_sweep_value(scenario: Scenario, vary: str, value: float) -> Scenario:
    """Scenario with one swept field replaced.

    tx_power scales all four SNRs linearly relative to the scenario's
    baseline (the configured SNRs correspond to 1 W).
    """
    if vary == "M":
        m = int(round(value))
        if m < 2:
            raise DomainError(f"swept M must be >= 2, got {value}")
        return replace(scenario, M=m)
    if vary == "tx_power":
        if value <= 0:
            raise DomainError("tx_power must be > 0")
        return replace(scenario,
                       gamma_ab=scenario.gamma_ab * value,
                       gamma_ae=scenario.gamma_ae * value,
                       gamma_ba=scenario.gamma_ba * value,
                       gamma_be=scenario.gamma_be * value)
    link = vary[len("gamma_"):-len("_db")]
    return replace(scenario, **{f"gamma_{link}": float(db_to_linear(value))})


def ibl_reference_lfp(scenario: Scenario) -> float:
    """Infinite-blocklength reference.

    In the asymptotic regime decoding is a step function of the rate:
    below capacity errors vanish, above it they are certain.  A
    direction can then be made simultaneously reliable and secure
    exactly when the legitimate capacity exceeds the eavesdropper's, so
    the reference LFP is 0 when both directions have a positive capacity
    gap and 1 otherwise.  This is a reconstruction of the usual
    asymptotic comparison curve, not a finite-m quantity.
    """
    forward = scenario.gamma_ab > scenario.gamma_ae
    backward = scenario.gamma_ba > scenario.gamma_be
    return 0.0 if (forward and backward) else 1.0


def _config_from_args(args) -> SolverConfig:
    kwargs = {}
    if getattr(args, "exponent", None) is not None:
        kwargs["surrogate_exponent"] = args.exponent
    if getattr(args, "no_safeguard", False):
        kwargs["mm_safeguard"] = False
    if getattr(args, "relaxed", False):
        kwargs["integer_mode"] = False
    return SolverConfig(**kwargs)


def _run_method(method, scenario, config):
    if method == "exhaustive" and not config.integer_mode:
        config = replace(config, integer_mode=True)
    return _METHODS[method](scenario, config)


# ----------------------------------------------------------------------
# solve
# ----------------------------------------------------------------------

def cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    config = _config_from_args(args)
    report = _run_method(args.method, scenario, config)
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_INFEASIBLE if report.status == STATUS_INFEASIBLE else EXIT_OK


# ----------------------------------------------------------------------
# converge
# ----------------------------------------------------------------------

def cmd_converge(args) -> int:
    scenario = load_scenario(args.scenario)
    config = _config_from_args(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in _METHODS:
            raise DomainError(f"unknown method {m!r}")
    reports = {}
    for m in methods:
        reports[m] = _run_method(m, scenario, config)
    bench = solve_exhaustive(scenario, replace(config, integer_mode=True))
    if bench.status == STATUS_INFEASIBLE or any(
            r.status == STATUS_INFEASIBLE for r in reports.values()):
        sys.stderr.write("error: scenario infeasible\n")
        return EXIT_INFEASIBLE
    max_k = max(r.trace[-1][0] for r in reports.values())
    lines = ["method,k,lfp"]
    for k in range(max_k + 1):
        lines.append(f"exhaustive,{k},{bench.lfp_final!r}")
    for m in methods:
        for k, v in reports[m].trace:
            lines.append(f"{m},{k},{v!r}")
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


# ----------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------

def _sweep_point(payload):
    """Evaluate one grid point (module-level so it pickles for the
    process pool)."""
    scenario, vary, value, methods, config = payload
    rows = []
    for method in methods:
        try:
            point = apply_sweep_value(scenario, vary, value)
        except DomainError as exc:
            # keep the cell CSV-safe: no separators from the message
            reason = str(exc).replace(",", ";").replace("\n", " ")
            rows.append({"vary": vary, "value": value, "method": method,
                         "status": f"error({reason})", "lfp_ibl": ""})
            continue
        report = _run_method(method, point, config)
        row = {"vary": vary, "value": value, "method": method,
               "status": report.status,
               "lfp_ibl": ibl_reference_lfp(point)}
        if report.status != STATUS_INFEASIBLE:
            row.update({
                "lfp": report.lfp_final,
                "m1": report.alloc.m1, "m2": report.alloc.m2,
                "d_r1": report.alloc.d_r1, "d_r2": report.alloc.d_r2,
                "iterations": report.trace[-1][0],
                "evaluations": report.evaluations,
                "wall_time": report.wall_time,
            })
        rows.append(row)
    return rows


def _format_cell(v):
    if v is None or v == "":
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(path, rows):
    lines = [",".join(RESULT_COLUMNS)]
    for row in rows:
        lines.append(",".join(_format_cell(row.get(c, "")) for c in RESULT_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_PLOT_TEMPLATE = """\
#!/usr/bin/env python3
# Generated alongside {csv_name}; renders minimized LFP (log scale)
# against the swept value.  Requires matplotlib, which the generating
# package itself never imports.
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

series = defaultdict(list)
ibl = []
with open({csv_name!r}, newline="") as fh:
    for row in csv.DictReader(fh):
        if row["status"] != "infeasible" and row["lfp"]:
            series[row["method"]].append((float(row["value"]),
                                          float(row["lfp"])))
        if row["lfp_ibl"]:
            ibl.append((float(row["value"]), float(row["lfp_ibl"])))

fig, ax = plt.subplots()
for method, pts in series.items():
    pts.sort()
    ax.semilogy([p[0] for p in pts], [max(p[1], 1e-300) for p in pts],
                marker="o", label=method)
if ibl:
    seen = sorted(set(ibl))
    ax.semilogy([p[0] for p in seen], [max(p[1], 1e-300) for p in seen],
                linestyle="--", color="gray", label="ibl reference")
ax.set_xlabel({vary!r})
ax.set_ylabel("leakage-failure probability")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig({png_name!r}, dpi=150)
print("wrote", {png_name!r})
"""


def _write_plot_script(csv_path, vary):
    base, _ = os.path.splitext(csv_path)
    script_path = base + "_plot.py"
    csv_name = os.path.basename(csv_path)
    png_name = os.path.basename(base) + ".png"
    with open(script_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_PLOT_TEMPLATE.format(csv_name=csv_name, png_name=png_name,
                                       vary=vary))
    return script_path


def _worker_count():
    raw = os.environ.get("FBLSEC_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError as exc:
            raise DomainError(f"FBLSEC_THREADS must be an integer, got {raw!r}") \
                from exc
        return max(1, n)
    return os.cpu_count() or 1


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    config = _config_from_args(args)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    spec = SweepSpec(vary=args.vary, start=args.start, stop=args.stop,
                     step=args.step, methods=methods)
    payloads = [(scenario, spec.vary, v, spec.methods, config)
                for v in spec.values()]
    workers = min(_worker_count(), len(payloads))
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_point, payloads))
    else:
        results = [_sweep_point(p) for p in payloads]
    rows = [row for point_rows in results for row in point_rows]
    _write_rows(args.out, rows)
    _write_plot_script(args.out, spec.vary)
    return EXIT_OK


# ----------------------------------------------------------------------
# validate
# ----------------------------------------------------------------------

def cmd_validate(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.trials < 1000:
        sys.stderr.write("error: --trials must be >= 1000\n")
        return EXIT_INPUT
    if not 1 <= args.m1 <= scenario.M - 1:
        sys.stderr.write(f"error: --m1 must lie in [1, {scenario.M - 1}]\n")
        return EXIT_INPUT
    alloc = Allocation(m1=args.m1, m2=scenario.M - args.m1,
                       d_r1=args.dr1, d_r2=args.dr2)
    errors = link_errors(scenario, alloc)
    analytic = lfp_value(scenario, float(alloc.m1),
                         float(alloc.d_r1), float(alloc.d_r2))
    # One Bernoulli event per link and per trial: both legitimate
    # decodes must succeed and both eavesdrops must fail.
    rng = np.random.default_rng(args.seed)
    u = rng.random((args.trials, 4))
    success = ((u[:, 0] < 1.0 - errors.eps_ab)
               & (u[:, 1] < errors.eps_ae)
               & (u[:, 2] < 1.0 - errors.eps_ba)
               & (u[:, 3] < errors.eps_be))
    empirical = 1.0 - float(np.mean(success))
    band = 4.0 * math.sqrt(max(analytic * (1.0 - analytic), 0.0) / args.trials)
    std_error = math.sqrt(max(empirical * (1.0 - empirical), 0.0) / args.trials)
    out = {
        "analytic_lfp": analytic,
        "empirical_lfp": empirical,
        "trials": args.trials,
        "seed": args.seed,
        "std_error": std_error,
        "band_4sigma": band,
        "within_band": bool(abs(empirical - analytic) <= band),
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad flags; the harness reserves 2
    for infeasible problems, so remap usage errors to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _build_parser():
    parser = _Parser(prog="fblsec",
                     description="Round-trip short-packet security: "
                                 "leakage-failure probability solvers "
                                 "and experiment harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--exponent", type=int, choices=(2, 4), default=None,
                       help="surrogate exponent (default 4)")
        p.add_argument("--no-safeguard", action="store_true",
                       help="disable the true-objective safeguard in mm")

    p_solve = sub.add_parser("solve", help="solve one scenario")
    add_common(p_solve)
    p_solve.add_argument("--method", required=True, choices=sorted(_METHODS))
    p_solve.add_argument("--relaxed", action="store_true",
                         help="report the relaxed (real-valued) solution")
    p_solve.set_defaults(func=cmd_solve)

    p_conv = sub.add_parser("converge", help="write per-iteration traces")
    add_common(p_conv)
    p_conv.add_argument("--methods", default="bcd,mm",
                        help="comma-separated iterative methods")
    p_conv.add_argument("--out", required=True, help="output CSV path")
    p_conv.set_defaults(func=cmd_converge, relaxed=False)

    p_sweep = sub.add_parser("sweep", help="sweep one field over a grid")
    add_common(p_sweep)
    p_sweep.add_argument("--vary", required=True, choices=SWEEP_FIELDS)
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--step", type=float, required=True)
    p_sweep.add_argument("--methods", required=True,
                         help="comma-separated subset of exhaustive,bcd,mm")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.set_defaults(func=cmd_sweep, relaxed=False)

    p_val = sub.add_parser("validate",
                           help="Monte-Carlo check of the analytic LFP")
    p_val.add_argument("--scenario", required=True)
    p_val.add_argument("--m1", type=int, required=True)
    p_val.add_argument("--dr1", type=int, required=True)
    p_val.add_argument("--dr2", type=int, required=True)
    p_val.add_argument("--trials", type=int, default=1_000_000)
    p_val.add_argument("--seed", type=int, default=0)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: {args.scenario}: line {exc.lineno} "
                         f"column {exc.colno}: {exc.msg}\n")
        return EXIT_INPUT
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (DomainError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
