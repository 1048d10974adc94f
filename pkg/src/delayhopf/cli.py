"""Command-line front end.

Four subcommands drive the library and serialize results as flat CSV files:

  hopf-curves   critical-delay curves over a k grid, per method and branch
  simulate      one trajectory of the full delayed oscillator
  detect-hopf   simulated Hopf delay by stability bisection in T
  compare       per-method accuracy report against the exact curve

Data goes to the output files and stdout; diagnostics (omission counts,
truncation warnings, classification) go to stderr.  Exit codes: 0 success,
2 usage error, 3 numerical failure (non-convergence / no crossing / below
threshold), 4 I/O failure, 5 integration or classification failure inside
detect-hopf.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace

from .charsolve import (
    CurveTarget,
    SweepPlan,
    continuation_sweep,
    erneux_pairing_report,
    slowflow_char_residual,
)
from .ddesim import DEFAULT_DT, classify_long_run, detect_hopf_bisection, integrate
from .errors import (
    AmbiguousClassificationError,
    ContinuationSeedError,
    DelayHopfError,
    EmptyComparisonError,
    InsufficientDataError,
    NoHopfError,
)
from .hopf_analytic import (
    ERNEUX_PAIRING_ALIGNED,
    ERNEUX_PAIRING_CROSSED,
    Branch,
    HopfPoint,
    Method,
    approach1_points,
    closed_form_branches,
)
from .systems import SystemKind, SystemSpec

CURVE_COLUMNS = ("system", "method", "branch", "epsilon", "alpha", "gamma", "k", "T", "omega")
COMPARISON_COLUMNS = ("system", "method", "branch", "max_abs_T_error", "mean_abs_T_error", "n_points")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4
EXIT_INTEGRATION = 5


class UsageError(Exception):
    """Semantic flag problems that argparse cannot catch on its own."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class CurveRow:
    system: str
    method: str
    branch: str
    epsilon: float
    alpha: float
    gamma: float
    k: float
    T: float
    omega: float

    @classmethod
    def from_point(cls, spec: SystemSpec, point: HopfPoint) -> "CurveRow":
        return cls(
            spec.kind.value, point.method.value, point.branch.value,
            spec.epsilon, spec.alpha, spec.gamma, point.k, point.T, point.omega,
        )

    def to_line(self) -> str:
        return ",".join(
            [self.system, self.method, self.branch]
            + [_fmt(v) for v in (self.epsilon, self.alpha, self.gamma, self.k, self.T, self.omega)]
        )


def sort_rows(rows: list[CurveRow]) -> list[CurveRow]:
    return sorted(rows, key=lambda r: (r.method, r.branch, r.k))


def write_curve_table(rows: list[CurveRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CURVE_COLUMNS) + "\n")
        for row in sort_rows(rows):
            fh.write(row.to_line() + "\n")


def read_curve_table(path: str) -> list[CurveRow]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != ",".join(CURVE_COLUMNS):
            raise ValueError(f"unexpected curve table header in {path}: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            rows.append(
                CurveRow(
                    parts[0], parts[1], parts[2],
                    *(float(p) for p in parts[3:9]),
                )
            )
    return rows


def _spec_from_args(args) -> SystemSpec:
    k = getattr(args, "k", None)
    return SystemSpec(
        kind=SystemKind(args.system),
        epsilon=args.epsilon,
        k=k if k is not None else 0.0,
        alpha=args.alpha,
        gamma=args.gamma,
    )


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _grid(args) -> list[float]:
    return SweepPlan("k", args.k_min, args.k_max, args.k_steps).values()


def _analytic_rows(template: SystemSpec, method: str, ks: list[float], pairing: str) -> tuple[list[CurveRow], int]:
    """Closed-form rows over the k grid; returns rows and omitted branch-point count."""
    rows: list[CurveRow] = []
    omitted = 0
    for k in ks:
        spec = replace(template, k=k)
        try:
            if method == Method.APPROACH_I.value:
                points = approach1_points(spec)
            else:
                forms = closed_form_branches(spec, erneux_pairing=pairing, skip_divergent=True)
                omitted += 2 - len(forms)
                points = [
                    HopfPoint(spec.k, f.T, f.omega, f.branch, Method.APPROACH_II) for f in forms
                ]
        except NoHopfError:
            omitted += 2
            continue
        rows.extend(CurveRow.from_point(spec, p) for p in points)
    return rows, omitted


def _exact_rows(template: SystemSpec, ks: list[float]) -> tuple[list[CurveRow], int]:
    """Ground-truth rows from continuation on the exact characteristic system."""
    rows: list[CurveRow] = []
    omitted = 0
    plan = SweepPlan("k", ks[0], ks[-1], len(ks))
    for branch in (Branch.LOWER, Branch.UPPER):
        try:
            result = continuation_sweep(template, plan, branch, CurveTarget.EXACT_CHAR)
        except ContinuationSeedError as exc:
            _diag(f"warning: exact {branch.value} branch skipped entirely: {exc}")
            omitted += len(ks)
            continue
        if result.truncated:
            _diag(f"warning: exact {branch.value} branch truncated: {result.reason}")
        omitted += len(ks) - len(result.points)
        for cp in result.points:
            rows.append(CurveRow.from_point(replace(template, k=cp.point.k), cp.point))
    return rows, omitted


def _certify_erneux_rows(template: SystemSpec, rows: list[CurveRow], pairing: str) -> None:
    """Report, never hide, summed-form rows the residual system rejects."""
    if template.kind != SystemKind.ERNEUX_GRASMAN:
        return
    bad_branches: set[str] = set()
    sample_k = None
    for row in rows:
        if row.method != Method.APPROACH_II.value:
            continue
        resid = slowflow_char_residual(replace(template, k=row.k), row.omega, row.T).norm()
        if resid >= 1e-9:
            bad_branches.add(row.branch)
            sample_k = row.k
    if bad_branches:
        _diag(
            f"warning: erneux approach2 rows ({pairing} pairing) fail the slow-flow "
            f"residual on branches: {sorted(bad_branches)}"
        )
        for line in erneux_pairing_report(template.epsilon, sample_k).lines():
            _diag("  " + line)


def cmd_hopf_curves(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    valid = {Method.APPROACH_I.value, Method.APPROACH_II.value, Method.EXACT_CHAR.value}
    unknown = set(methods) - valid
    if unknown or not methods:
        raise UsageError(f"unknown methods {sorted(unknown)}; choose from {sorted(valid)}")
    template = _spec_from_args(args)
    ks = _grid(args)
    rows: list[CurveRow] = []
    for method in methods:
        if method == Method.EXACT_CHAR.value:
            new_rows, omitted = _exact_rows(template, ks)
        else:
            new_rows, omitted = _analytic_rows(template, method, ks, args.erneux_pairing)
        if omitted:
            _diag(f"method {method}: omitted {omitted} of {2 * len(ks)} branch points")
        rows.extend(new_rows)
    _certify_erneux_rows(template, rows, args.erneux_pairing)
    write_curve_table(rows, args.out)
    _diag(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _parse_history(text: str) -> float:
    if text.startswith("const:"):
        return float(text[len("const:"):])
    return float(text)


def cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    history = _parse_history(args.history)
    traj = integrate(
        spec, args.delay, history, args.dt, args.t_end, x0=args.x0, v0=args.v0,
    )
    traj.write_csv(args.out)
    if traj.overflow:
        _diag("trajectory overflowed and was truncated at the last finite sample")
    try:
        verdict = classify_long_run(traj)
    except (AmbiguousClassificationError, InsufficientDataError) as exc:
        _diag(f"classification: unresolved ({exc})")
    else:
        if verdict.amplitude is not None:
            _diag(f"classification: {verdict.kind.value} amplitude={_fmt(verdict.amplitude)}")
        else:
            _diag(f"classification: {verdict.kind.value}")
    _diag(f"wrote {len(traj.t)} samples to {args.out}")
    return EXIT_OK


def cmd_detect_hopf(args) -> int:
    if args.t_lo >= args.t_hi:
        raise UsageError(f"bracket reversed: --t-lo {args.t_lo} must be below --t-hi {args.t_hi}")
    spec = _spec_from_args(args)
    point = detect_hopf_bisection(
        spec, args.t_lo, args.t_hi, tol_T=args.tol, dt=args.dt, t_end=args.t_end,
    )
    print(
        f"{_fmt(point.k)},{_fmt(point.T)},{_fmt(point.omega)},"
        f"method={point.method.value},branch={point.branch.value}"
    )
    if args.append_csv:
        row = CurveRow.from_point(spec, point)
        try:
            existing = read_curve_table(args.append_csv)
        except FileNotFoundError:
            existing = []
        write_curve_table(existing + [row], args.append_csv)
    return EXIT_OK


def cmd_compare(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    valid = {Method.APPROACH_I.value, Method.APPROACH_II.value, Method.EXACT_CHAR.value}
    unknown = set(methods) - valid
    if unknown or not methods:
        raise UsageError(f"unknown methods {sorted(unknown)}; choose from {sorted(valid)}")
    template = _spec_from_args(args)
    ks = _grid(args)
    exact_rows, _ = _exact_rows(template, ks)
    exact_by_branch: dict[str, dict[float, float]] = {}
    for row in exact_rows:
        exact_by_branch.setdefault(row.branch, {})[row.k] = row.T
    report_lines = []
    for method in methods:
        if method == Method.EXACT_CHAR.value:
            by_branch = exact_by_branch
        else:
            rows, _ = _analytic_rows(template, method, ks, args.erneux_pairing)
            by_branch = {}
            for row in rows:
                by_branch.setdefault(row.branch, {})[row.k] = row.T
        for branch in (Branch.LOWER.value, Branch.UPPER.value):
            exact_ts = exact_by_branch.get(branch, {})
            method_ts = by_branch.get(branch, {})
            common = sorted(set(exact_ts) & set(method_ts))
            if not common:
                raise EmptyComparisonError(
                    f"empty overlap between method {method} and the exact curve "
                    f"on branch {branch}: nothing to compare"
                )
            errors = [abs(method_ts[k] - exact_ts[k]) for k in common]
            report_lines.append(
                (template.kind.value, method, branch, max(errors),
                 sum(errors) / len(errors), len(errors))
            )
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(COMPARISON_COLUMNS) + "\n")
        for system, method, branch, mx, mean, n in report_lines:
            fh.write(f"{system},{method},{branch},{_fmt(mx)},{_fmt(mean)},{n}\n")
    _diag(f"wrote {len(report_lines)} comparison rows to {args.out}")
    return EXIT_OK


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", required=True, choices=[k.value for k in SystemKind])
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k-min", type=float, required=True)
    p.add_argument("--k-max", type=float, required=True)
    p.add_argument("--k-steps", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delayhopf",
        description="Hopf bifurcation curves for oscillators with delayed self-feedback",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hopf-curves", help="critical-delay curves over a k grid")
    _add_system_flags(p)
    _add_grid_flags(p)
    p.add_argument("--methods", default="approach1,approach2,exact")
    p.add_argument(
        "--erneux-pairing", default=ERNEUX_PAIRING_CROSSED,
        choices=[ERNEUX_PAIRING_CROSSED, ERNEUX_PAIRING_ALIGNED],
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hopf_curves)

    p = sub.add_parser("simulate", help="integrate one trajectory and classify it")
    _add_system_flags(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--delay", type=float, required=True)
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--history", default="const:0.1")
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--v0", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect-hopf", help="bisect the simulated Hopf delay in T")
    _add_system_flags(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--t-lo", type=float, required=True)
    p.add_argument("--t-hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--append-csv", default=None)
    p.set_defaults(func=cmd_detect_hopf)

    p = sub.add_parser("compare", help="accuracy of analytic methods against the exact curve")
    _add_system_flags(p)
    _add_grid_flags(p)
    p.add_argument("--methods", default="approach1,approach2")
    p.add_argument(
        "--erneux-pairing", default=ERNEUX_PAIRING_CROSSED,
        choices=[ERNEUX_PAIRING_CROSSED, ERNEUX_PAIRING_ALIGNED],
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _diag(f"usage error: {exc}")
        return EXIT_USAGE
    except ValueError as exc:
        _diag(f"usage error: {exc}")
        return EXIT_USAGE
    except (AmbiguousClassificationError, InsufficientDataError) as exc:
        _diag(f"integration failure: {exc}")
        return EXIT_INTEGRATION
    except DelayHopfError as exc:
        _diag(f"numerical failure: {exc}")
        return EXIT_NUMERICAL
    except OSError as exc:
        _diag(f"I/O failure: {exc}")
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
