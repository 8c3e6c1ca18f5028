"""Command-line front end.

Every subcommand writes CSV (header row first) or, for ``table``, optionally
a markdown table.  Exit status: 0 on success, 1 when a verification fails
(for instance an infeasible certificate), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass

import numpy as np

from . import algorithms, certificates, coefficients, oracles, sequences, worst_case

SUBCOMMANDS = ("seq", "coeffs", "run", "bounds", "certify", "hopt", "table")


@dataclass
class RunConfig:
    subcommand: str
    N: int | None = None
    L: float = 1.0
    R: float = 1.0
    d: int = 1
    h: float | None = None
    seed: int = 0
    fmt: str = "csv"
    output: str | None = None
    precision: int | None = None

    @classmethod
    def from_args(cls, args):
        return cls(subcommand=args.command, N=getattr(args, "n", None), L=args.L, R=args.R,
                   d=args.d, h=getattr(args, "h", None), seed=getattr(args, "seed", 0),
                   fmt=args.format, output=args.output, precision=args.precision)

    def number(self, value) -> str:
        if value is None:
            return ""
        if isinstance(value, (bool, np.bool_)):
            return str(bool(value)).lower()
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        return f"{float(value):.{self.precision or 6}g}"


class UsageError(Exception):
    pass


def _emit(cfg: RunConfig, header, rows, out):
    if cfg.fmt == "markdown":
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|" + "---|" * len(header) + "\n")
        for row in rows:
            out.write("| " + " | ".join(row) + " |\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def cmd_seq(cfg, args, out):
    table = sequences.t_sequence(cfg.N) if args.kind == "t" else sequences.theta_sequence(cfg.N)
    _emit(cfg, ["i", "value"], [[str(i), cfg.number(v)] for i, v in enumerate(table)], out)
    return 0


def _step_matrix(variant, N, h, rule="recursive"):
    if variant == "ogm":
        return coefficients.ogm_step_matrix(N, rule)
    if variant == "ogm-prime":
        return coefficients.ogm_prime_step_matrix(N, rule)
    if h is None:
        raise UsageError("--h is required for the gm variant")
    return coefficients.constant_step_matrix(h, N)


def cmd_coeffs(cfg, args, out):
    H = _step_matrix(args.variant, cfg.N, cfg.h, args.rule)
    rows = [[str(k), str(j), cfg.number(v)] for k, j, v in H.rows()]
    _emit(cfg, ["k", "i", "h"], rows, out)
    return 0


def _default_radius(method, N, R, h):
    if method == "gm":
        return R / (2 * N * h + 1)
    if method in ("ogm1", "ogm2"):
        return R / sequences.theta_sequence(N)[N] ** 2
    if method in ("ogm1p", "ogm2p", "nes13"):
        return R / (2 * sequences.t_sequence(N - 1)[N - 1] ** 2 + 1)
    raise UsageError(f"--r is required for method {method} on the huber function")


def cmd_run(cfg, args, out):
    method, N = args.method, cfg.N
    if method == "gm" and cfg.h is None:
        raise UsageError("--h is required for method gm")
    if args.function == "quadratic":
        oracle = oracles.quadratic_oracle(cfg.L, cfg.d)
    elif args.function == "huber":
        r = args.r if args.r is not None else _default_radius(method, N, cfg.R, cfg.h)
        oracle = oracles.huber_oracle(oracles.HuberSpec(cfg.L, r, cfg.d))
    else:
        oracle = oracles.random_quadratic_oracle(cfg.seed, cfg.L, cfg.d)
    x0 = np.zeros(cfg.d)
    x0[0] = cfg.R
    H = _step_matrix(args.variant, N, cfg.h) if method == "fo" else None
    traj = algorithms.run_method(method, oracle, x0, N, h=cfg.h, H=H)
    gap_y = traj.gap_y
    rows = []
    for i in range(N + 1):
        rows.append([str(i), cfg.number(np.linalg.norm(traj.x[i])), cfg.number(traj.gap_x[i]),
                     cfg.number(None if gap_y is None else gap_y[i])])
    _emit(cfg, ["i", "norm_x", "gap_x", "gap_y"], rows, out)
    return 0


def cmd_bounds(cfg, args, out):
    header = ["i", "upper", "simplified_upper", "lower", "tightness"]
    if args.method == "gm":
        if cfg.h is None:
            raise UsageError("--h is required for method gm")
        reports = [worst_case.gm_worst_bound(cfg.h, cfg.N, cfg.L, cfg.R)]
    else:
        method = args.method.replace("-", "_")
        reports = [worst_case.analytic_bound(method, args.sequence, i, cfg.N, cfg.L, cfg.R)
                   for i in range(1, cfg.N + 1)]
    rows = [[str(b.i), cfg.number(b.upper_bound), cfg.number(b.simplified_upper),
             cfg.number(b.lower_bound), b.tightness] for b in reports]
    _emit(cfg, header, rows, out)
    return 0


def _parse_perturb(text):
    try:
        k, j, delta = text.split(",")
        return int(k), int(j), float(delta)
    except ValueError:
        raise UsageError(f"--perturb expects k,j,delta, got {text!r}") from None


def cmd_certify(cfg, args, out):
    N = cfg.N
    if args.variant == "ogm":
        H, m, variant = coefficients.ogm_step_matrix(N), certificates.ogm_multipliers(N), certificates.D
        closed = cfg.L * cfg.R**2 / (2 * sequences.theta_sequence(N)[N] ** 2)
    else:
        H = coefficients.ogm_prime_step_matrix(N)
        m, variant = certificates.ogm_prime_multipliers(N), certificates.D_PRIME
        closed = cfg.L * cfg.R**2 / (4 * sequences.t_sequence(N)[N] ** 2)
    if args.perturb:
        try:
            H = H.perturbed(*_parse_perturb(args.perturb))
        except IndexError as exc:
            raise UsageError(str(exc)) from None
    rows = [[f"residual_{k}", cfg.number(v)] for k, v in m.residuals().items()]
    try:
        cert = certificates.verify_certificate(H, m, variant, cfg.L, cfg.R)
    except certificates.MultiplierError as exc:
        rows.append(["verdict", "rejected"])
        _emit(cfg, ["quantity", "value"], rows, out)
        print(exc, file=sys.stderr)
        return 1
    rows += [
        ["min_eigenvalue", cfg.number(cert.min_eigenvalue)],
        ["psd_threshold", cfg.number(-certificates.PSD_TOL * np.abs(cert.block).max())],
        ["verdict", cert.verdict],
    ]
    if cert.rank_one_residual is not None:
        rows.append(["rank_one_residual", cfg.number(cert.rank_one_residual)])
    rows += [["bound", cfg.number(cert.bound)], ["bound_closed_form", cfg.number(closed)]]
    _emit(cfg, ["quantity", "value"], rows, out)
    ok = cert.feasible and (cert.rank_one_residual is None
                            or cert.rank_one_residual <= certificates.RANK_ONE_TOL)
    return 0 if ok else 1


def cmd_hopt(cfg, args, out):
    h = worst_case.h_opt(cfg.N)
    slow, overshoot = worst_case.gm_branches(h, cfg.N)
    _emit(cfg, ["N", "h_opt", "slow_branch", "overshoot_branch"],
          [[str(cfg.N), cfg.number(h), cfg.number(slow), cfg.number(overshoot)]], out)
    return 0


def cmd_table(cfg, args, out):
    try:
        n_list = [int(v) for v in args.n_list.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--n-list expects comma-separated integers, got {args.n_list!r}") from None
    if not n_list or min(n_list) < 1:
        raise UsageError("--n-list needs positive integers")
    rows = worst_case.reproduce_table1(n_list)
    fmt = (lambda v: f"{v:.2f}") if cfg.precision is None else cfg.number
    header = ["N", "fgm_primary_upper", "fgm_secondary_upper", "ogm_primary",
              "ogm_secondary", "ogm_prime_secondary", "simulation_confirmed"]
    body = [[str(r.N), *(fmt(v) for v in r.denominators()), str(r.confirmed).lower()]
            for r in rows]
    _emit(cfg, header, body, out)
    return 0 if all(r.confirmed for r in rows) else 1


HANDLERS = {
    "seq": cmd_seq, "coeffs": cmd_coeffs, "run": cmd_run, "bounds": cmd_bounds,
    "certify": cmd_certify, "hopt": cmd_hopt, "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--L", type=float, default=1.0, help="gradient Lipschitz constant (default 1)")
    common.add_argument("--R", type=float, default=1.0, help="initial distance to the optimum (default 1)")
    common.add_argument("--d", type=int, default=1, help="dimension (default 1)")
    common.add_argument("--precision", type=int, default=None,
                        help="significant digits (default 6; table defaults to 2 decimals)")
    common.add_argument("--format", choices=("csv", "markdown"), default="csv")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ogmpep",
        description="Fixed-step first-order methods, worst-case functions and dual certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    p = sub.add_parser("seq", parents=[common], help="momentum scalars; columns: i,value")
    p.add_argument("--kind", choices=("t", "theta"), required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("coeffs", parents=[common], help="step coefficients; columns: k,i,h (h_{k,i})")
    p.add_argument("--variant", choices=("ogm", "ogm-prime", "gm"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float)
    p.add_argument("--rule", choices=("recursive", "summation"), default="recursive")

    p = sub.add_parser("run", parents=[common],
                       help="run a method; columns: i,norm_x,gap_x,gap_y (gap_y empty when undefined)")
    p.add_argument("--method", choices=algorithms.METHODS, required=True)
    p.add_argument("--function", choices=("quadratic", "huber", "random-quadratic"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float)
    p.add_argument("--r", type=float, help="Huber breakpoint radius (default: matched worst case)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant", choices=("ogm", "ogm-prime", "gm"), default="ogm",
                   help="step matrix replayed by --method fo")

    p = sub.add_parser("bounds", parents=[common],
                       help="analytic bounds; columns: i,upper,simplified_upper,lower,tightness")
    p.add_argument("--method", choices=("fgm", "ogm", "ogm-prime", "gm"), required=True)
    p.add_argument("--sequence", choices=("primary", "secondary"), default="secondary")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float)

    p = sub.add_parser("certify", parents=[common],
                       help="verify a built-in dual certificate; columns: quantity,value")
    p.add_argument("--variant", choices=("ogm", "ogm-prime"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perturb", help="add delta to h_{k,j}, given as k,j,delta")

    p = sub.add_parser("hopt", parents=[common],
                       help="optimal constant GM step; columns: N,h_opt,slow_branch,overshoot_branch")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("table", parents=[common],
                       help="last-iterate denominators c in LR^2/c; FGM columns are upper bounds only")
    p.add_argument("--n-list", default=",".join(map(str, worst_case.TABLE1_N)))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig.from_args(args)
    if cfg.N is not None and cfg.N < (0 if args.command == "seq" else 1):
        parser.error("--n is out of range")
    if cfg.precision is not None and cfg.precision < 1:
        parser.error("--precision must be >= 1")
    buf = io.StringIO()
    try:
        code = HANDLERS[args.command](cfg, args, buf)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


def dispatch(argv) -> int:
    """Run the CLI and return its exit code instead of raising SystemExit."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
