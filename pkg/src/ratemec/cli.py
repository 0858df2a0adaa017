"""Command-line front end: solve, sweep, oracle, simulate.

Output discipline: data rows are a pure function of the flags (floats
rendered with repr, so identical invocations produce byte-identical
rows), metadata lines are prefixed with ``#`` and carry no timestamps,
and the CSV schema is fixed with absent fields emitted as empty cells.

Exit codes: 0 success, 1 usage or domain error, 2 infeasible problem,
3 monotonicity violation during a rate sweep (a solver-bug signal),
4 oracle mismatch.

A ``--config`` file supplies ``key=value`` defaults (one per line,
``#`` comments allowed); explicit flags always win.  Relative
``--output`` paths resolve under ``$RATEMEC_OUTPUT_DIR`` when that
variable is set.  The environment variable ``RATEMEC_ORACLE_PERTURB``
adds a float offset to the closed-form value inside ``oracle`` before
comparison; it exists so tests can exercise the mismatch exit path
without breaking a solver.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .bernoulli_rate import MapMixture, RateProblem, solve_mecbr
from .bernoulli_rate_class import RateClassProblem, solve_mecbrc
from .errors import (
    DomainError,
    InfeasibleError,
    MonotonicityError,
    OracleMismatchError,
)
from .generic_oracle import (
    build_polytope,
    coupling_oracle_theta,
    enumerate_maps,
    solve_vertex,
)
from .mc_sim import SimConfig, simulate, verify_constraints
from .prob_core import Pmf

_VERSION = "0.1.0"

#: Fixed curve-point schema; columns are never dropped, only left empty.
SCHEMA = "qx,qy,qs1,rate,cclass,value_bits,p1,p2,p3,p4,case_label,alpha"

#: Scalar schema for simulation reports in CSV form.
SIM_SCHEMA = (
    "qx,qy,qs1,rate,cclass,samples,seed,streams,generator,"
    "q_y_hat,mi_xy_hat,h_y_given_u_hat,h_y_given_xu_hat,"
    "h_s_given_y_hat,h_s_given_yu_hat,"
    "rate_slack,class_slack_s_given_y,class_slack_s_given_y_u"
)

ORACLE_SCHEMA = "closed_form_bits,vertex_bits,abs_diff"

#: Two cross-checked solvers must agree this tightly or ``oracle`` exits 4.
ORACLE_TOL = 1e-8

#: A rate sweep may never see the value drop by more than this.
MONOTONE_TOL = 1e-12


class _UsageExit(Exception):
    """Raised by the parser instead of argparse's SystemExit(2)."""


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; this tool reserves
    2 for infeasible problems, so usage errors are rerouted to exit 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageExit(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class CurvePoint:
    """One output row; field order matches the CSV schema exactly."""

    qx: float
    qy: float
    qs1: float | None
    rate: float
    cclass: float | None
    value_bits: float | None
    p1: float | None
    p2: float | None
    p3: float | None
    p4: float | None
    case_label: str
    alpha: float | None

    def _values(self) -> tuple:
        return (
            self.qx, self.qy, self.qs1, self.rate, self.cclass,
            self.value_bits, self.p1, self.p2, self.p3, self.p4,
            self.case_label, self.alpha,
        )

    def csv_row(self) -> str:
        return ",".join(_fmt(v) for v in self._values())

    def as_dict(self) -> dict:
        return dict(zip(SCHEMA.split(","), self._values()))


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep request: which budget varies and over what grid."""

    var: str
    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if self.var not in ("rate", "cclass"):
            raise DomainError(f"--var must be 'rate' or 'cclass', got {self.var!r}")
        if not (self.start <= self.stop):
            raise DomainError(
                f"sweep start {self.start!r} must not exceed stop {self.stop!r}"
            )
        if self.steps < 2:
            raise DomainError(f"sweep needs at least 2 steps, got {self.steps!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


_CONFIG_TYPES = {
    "qx": float, "qy": float, "qs1": float, "rate": float, "cclass": float,
    "start": float, "stop": float, "steps": int, "samples": int, "seed": int,
    "streams": int, "grid": int, "var": str, "format": str, "output": str,
    "mixture": str,
}

_CONFIG_ALIASES = {"from": "start", "to": "stop"}

_FLAG_NAMES = {"start": "from", "stop": "to"}


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the --config file; explicit flags win."""
    path = getattr(args, "config", None)
    if path is None:
        return
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DomainError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key = _CONFIG_ALIASES.get(key.strip(), key.strip())
        value = value.strip()
        if key not in _CONFIG_TYPES:
            raise DomainError(f"{path}:{lineno}: unknown config key {key!r}")
        if not hasattr(args, key):
            raise DomainError(
                f"{path}:{lineno}: key {key!r} does not apply to this subcommand"
            )
        if getattr(args, key) is None:
            try:
                setattr(args, key, _CONFIG_TYPES[key](value))
            except ValueError as exc:
                raise DomainError(
                    f"{path}:{lineno}: cannot parse {value!r} for {key!r}"
                ) from exc


def _require(args: argparse.Namespace, names: list[str]) -> None:
    missing = [
        "--" + _FLAG_NAMES.get(n, n) for n in names if getattr(args, n) is None
    ]
    if missing:
        raise DomainError("missing required flags: " + ", ".join(missing))


def _check_label_pair(args: argparse.Namespace) -> None:
    if (args.qs1 is None) != (args.cclass is None):
        raise DomainError("--qs1 and --cclass must be given together")


def _emit(text: str, args: argparse.Namespace) -> None:
    output = getattr(args, "output", None)
    if output is None:
        print(text)
        return
    path = output
    if not os.path.isabs(path):
        base = os.environ.get("RATEMEC_OUTPUT_DIR")
        if base:
            path = os.path.join(base, path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _meta_lines(args: argparse.Namespace) -> list[str]:
    echo = " ".join(getattr(args, "argv_echo", []))
    return [f"# ratemec {_VERSION}", f"# command: {echo}"]


def _solve_point(
    qx: float, qy: float, qs1: float | None, rate: float, cclass: float | None
) -> CurvePoint:
    if qs1 is not None:
        result = solve_mecbrc(RateClassProblem(qx, qy, qs1, rate, cclass))
    else:
        result = solve_mecbr(RateProblem(qx, qy, rate))
    m = result.mixture
    return CurvePoint(
        qx=qx, qy=qy, qs1=qs1, rate=rate, cclass=cclass,
        value_bits=result.value,
        p1=m.p1 if m is not None else None,
        p2=m.p2 if m is not None else None,
        p3=m.p3 if m is not None else None,
        p4=m.p4 if m is not None else None,
        case_label=result.case_label,
        alpha=result.alpha,
    )


def _infeasible_point(
    qx: float, qy: float, qs1: float | None, rate: float, cclass: float | None
) -> CurvePoint:
    return CurvePoint(
        qx=qx, qy=qy, qs1=qs1, rate=rate, cclass=cclass,
        value_bits=None, p1=None, p2=None, p3=None, p4=None,
        case_label="Infeasible", alpha=None,
    )


def _emit_points(points: list[CurvePoint], args: argparse.Namespace) -> None:
    fmt = args.format or "csv"
    if fmt == "json":
        payload = [p.as_dict() for p in points]
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2)
    else:
        lines = _meta_lines(args) + [SCHEMA] + [p.csv_row() for p in points]
        text = "\n".join(lines)
    _emit(text, args)


def cmd_solve(args: argparse.Namespace) -> int:
    _require(args, ["qx", "qy", "rate"])
    _check_label_pair(args)
    point = _solve_point(args.qx, args.qy, args.qs1, args.rate, args.cclass)
    _emit_points([point], args)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    _require(args, ["var", "start", "stop", "steps", "qx", "qy"])
    if args.var == "rate" and args.rate is not None:
        raise DomainError("--rate conflicts with --var rate; set the range with --from/--to")
    if args.var == "cclass":
        if args.cclass is not None:
            raise DomainError("--cclass conflicts with --var cclass; set the range with --from/--to")
        _require(args, ["rate", "qs1"])
    if args.var == "rate":
        _check_label_pair(args)
    spec = SweepSpec(var=args.var, start=args.start, stop=args.stop, steps=args.steps)

    points: list[CurvePoint] = []
    prev_value: float | None = None
    for v in spec.grid():
        rate = float(v) if spec.var == "rate" else args.rate
        cclass = args.cclass if spec.var == "rate" else float(v)
        try:
            point = _solve_point(args.qx, args.qy, args.qs1, rate, cclass)
        except InfeasibleError:
            points.append(_infeasible_point(args.qx, args.qy, args.qs1, rate, cclass))
            continue
        if spec.var == "rate" and prev_value is not None:
            if point.value_bits < prev_value - MONOTONE_TOL:
                raise MonotonicityError(
                    f"value decreased from {prev_value!r} to {point.value_bits!r} "
                    f"at rate={rate!r}; the curve must be nondecreasing in the rate budget"
                )
        if spec.var == "rate":
            prev_value = point.value_bits
        points.append(point)
    _emit_points(points, args)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    _require(args, ["qx", "qy", "rate"])
    _check_label_pair(args)

    closed_value: float | None = None
    try:
        if args.qs1 is not None:
            closed_value = solve_mecbrc(
                RateClassProblem(args.qx, args.qy, args.qs1, args.rate, args.cclass)
            ).value
        else:
            closed_value = solve_mecbr(RateProblem(args.qx, args.qy, args.rate)).value
    except InfeasibleError:
        pass
    perturb = os.environ.get("RATEMEC_ORACLE_PERTURB")
    if perturb is not None and closed_value is not None:
        closed_value += float(perturb)

    vertex_value: float | None = None
    p_x = Pmf(np.array([1.0 - args.qx, args.qx]))
    p_y = Pmf(np.array([1.0 - args.qy, args.qy]))
    table = enumerate_maps(2, 2, p_x, q_s1=args.qs1)
    polytope = build_polytope(
        table, p_y, rate=args.rate, cclass=args.cclass
    )
    try:
        vertex_value = solve_vertex(polytope, table, p_x).value
    except InfeasibleError:
        pass

    theta_note: tuple[float, float] | None = None
    if args.grid is not None:
        theta_note = coupling_oracle_theta(args.qx, args.qy, args.grid)

    diff = (
        abs(closed_value - vertex_value)
        if closed_value is not None and vertex_value is not None
        else None
    )
    fmt = args.format or "csv"
    if fmt == "json":
        payload = {
            "closed_form_bits": closed_value,
            "vertex_bits": vertex_value,
            "abs_diff": diff,
        }
        if theta_note is not None:
            payload["theta_oracle"] = {"theta": theta_note[0], "value_bits": theta_note[1]}
        text = json.dumps(payload, indent=2)
    else:
        lines = _meta_lines(args)
        if theta_note is not None:
            lines.append(
                f"# theta_oracle: theta={theta_note[0]!r} value_bits={theta_note[1]!r}"
            )
        lines.append(ORACLE_SCHEMA)
        cells = (
            "infeasible" if closed_value is None else repr(closed_value),
            "infeasible" if vertex_value is None else repr(vertex_value),
            _fmt(diff),
        )
        lines.append(",".join(cells))
        text = "\n".join(lines)
    _emit(text, args)

    if (closed_value is None) != (vertex_value is None):
        raise OracleMismatchError(
            "feasibility verdicts disagree: closed form says "
            f"{'infeasible' if closed_value is None else 'feasible'}, "
            f"vertex oracle says {'infeasible' if vertex_value is None else 'feasible'}"
        )
    if diff is not None and diff > ORACLE_TOL:
        raise OracleMismatchError(
            f"|closed_form - vertex| = {diff!r} exceeds the {ORACLE_TOL!r} agreement bound"
        )
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    _require(args, ["qx", "qy", "rate", "samples", "seed"])
    _check_label_pair(args)
    if args.qs1 is not None:
        problem = RateClassProblem(args.qx, args.qy, args.qs1, args.rate, args.cclass)
    else:
        problem = RateProblem(args.qx, args.qy, args.rate)

    if args.mixture is not None:
        parts = args.mixture.split(",")
        if len(parts) != 4:
            raise DomainError(
                f"--mixture needs four comma-separated weights, got {args.mixture!r}"
            )
        try:
            weights = [float(t) for t in parts]
        except ValueError as exc:
            raise DomainError(f"cannot parse --mixture {args.mixture!r}") from exc
        mixture = MapMixture(*weights)
    else:
        if args.qs1 is not None:
            mixture = solve_mecbrc(problem).mixture
        else:
            mixture = solve_mecbr(problem).mixture

    cfg = SimConfig(
        problem=problem,
        mixture=mixture,
        samples=args.samples,
        seed=args.seed,
        streams=args.streams if args.streams is not None else 1,
    )
    report = simulate(cfg)
    slacks = verify_constraints(report, problem)

    fmt = args.format or "json"
    if fmt == "json":
        payload = report.to_dict()
        payload["slacks"] = slacks
        text = json.dumps(payload, indent=2)
    else:
        row = ",".join(_fmt(v) for v in (
            report.q_x, report.q_y, report.q_s1, report.rate, report.cclass,
            report.samples, report.seed, report.streams, report.generator,
            report.q_y_hat, report.mi_xy_hat, report.h_y_given_u_hat,
            report.h_y_given_xu_hat, report.h_s_given_y_hat,
            report.h_s_given_yu_hat,
            slacks["rate_slack"], slacks["class_slack_s_given_y"],
            slacks["class_slack_s_given_y_u"],
        ))
        text = "\n".join(_meta_lines(args) + [SIM_SCHEMA, row])
    _emit(text, args)
    return 0


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--qx", type=float, default=None, help="source marginal P(X=1)")
    p.add_argument("--qy", type=float, default=None, help="target marginal P(Y=1)")
    p.add_argument("--qs1", type=float, default=None,
                   help="label flip rate in (0, 0.5]; requires --cclass")
    p.add_argument("--rate", type=float, default=None, help="rate budget in bits")
    p.add_argument("--cclass", type=float, default=None,
                   help="classification budget in bits; requires --qs1")
    p.add_argument("--config", default=None,
                   help="key=value defaults file; explicit flags override it")
    p.add_argument("--format", choices=("csv", "json"), default=None,
                   help="output format (csv default; simulate defaults to json)")
    p.add_argument("--output", default=None,
                   help="write to this file instead of stdout; relative paths "
                        "resolve under $RATEMEC_OUTPUT_DIR when set")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="ratemec",
        description="Rate- and classification-constrained maximum-information "
                    "couplings of binary marginals.",
    )
    sub = parser.add_subparsers(dest="command", metavar="{solve,sweep,oracle,simulate}")

    solve_p = sub.add_parser("solve", help="solve one problem instance")
    _add_common_flags(solve_p)

    sweep_p = sub.add_parser("sweep", help="sweep the rate or classification budget")
    _add_common_flags(sweep_p)
    sweep_p.add_argument("--var", choices=("rate", "cclass"), default=None,
                         help="which budget to sweep")
    sweep_p.add_argument("--from", dest="start", type=float, default=None,
                         help="sweep start in bits")
    sweep_p.add_argument("--to", dest="stop", type=float, default=None,
                         help="sweep stop in bits")
    sweep_p.add_argument("--steps", type=int, default=None, help="number of points")

    oracle_p = sub.add_parser("oracle", help="cross-check solvers against the "
                                             "vertex-enumeration oracle")
    _add_common_flags(oracle_p)
    oracle_p.add_argument("--grid", type=int, default=None,
                          help="also run the coupling-cell grid oracle at this "
                               "many points")

    sim_p = sub.add_parser("simulate", help="Monte Carlo check of a mixture")
    _add_common_flags(sim_p)
    sim_p.add_argument("--samples", type=int, default=None, help="number of draws")
    sim_p.add_argument("--seed", type=int, default=None, help="RNG seed")
    sim_p.add_argument("--streams", type=int, default=None,
                       help="independent generator streams (default 1)")
    sim_p.add_argument("--mixture", default=None,
                       help="override mixture weights 'p1,p2,p3,p4' "
                            "(default: the solver's optimum)")
    return parser


_HANDLERS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.error("a subcommand is required")
        args.argv_echo = list(argv) if argv is not None else sys.argv[1:]
        _merge_config(args)
        return _HANDLERS[args.command](args)
    except _UsageExit:
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except MonotonicityError as exc:
        print(f"monotonicity violation: {exc}", file=sys.stderr)
        return 3
    except OracleMismatchError as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
