"""Command-line front end.

Results go to standard output and are deterministic; timings and
diagnostics go to standard error.  Exit codes: 0 success, 1 infeasible or
not equivalent, 2 usage or input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .certificates import certify, compact_support, verify_certificate
from .errors import BudgetExceeded, Infeasible
from .formats import (FormatError, parse_certificate, parse_kernel, parse_matrix, serialize_certificate,
                      serialize_kernel, serialize_nfold, serialize_sidecar)
from .graver import basebound, dual_graph, graver_basis, is_path
from .instance import InstanceFormatError, parse_instance
from .nfold import build_model
from .objreduce import frank_tardos, sign_equivalent
from .oracle import OracleBudget, brute_schedule, exhaustive_confilp, verify_kernel
from .pipeline import check_kernel_record, kernelize, solve_lp_only
from .separation import DEFAULT_CAPACITY_BUDGET, DEFAULT_STATE_BUDGET

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
FT_CHECK_LIMIT = 10**6


def _fmt(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _vec(c) -> str:
    return "(" + ", ".join(map(str, c)) + ")"


def _read_instance(path: str):
    return parse_instance(Path(path).read_text())


def _add_budgets(p: argparse.ArgumentParser):
    p.add_argument("--dp-capacity-budget", type=int, default=DEFAULT_CAPACITY_BUDGET,
                   help="largest knapsack capacity solved by the plain DP (default %(default)s)")
    p.add_argument("--dp-state-budget", type=int, default=DEFAULT_STATE_BUDGET,
                   help="largest DP state range for windowed and path DPs (default %(default)s)")


def cmd_kernelize(args, out, err) -> int:
    inst = _read_instance(args.input)
    if args.dump_model:
        Path(args.dump_model).write_text(serialize_nfold(build_model(inst)))
    kernel, report = kernelize(inst, args.proximity_override, args.dp_capacity_budget, args.dp_state_budget)
    Path(args.out).write_text(serialize_kernel(kernel))
    sidecar = args.sidecar or args.out + ".sidecar"
    Path(sidecar).write_text(serialize_sidecar(kernel.reduced))
    for line in report.lines():
        print(line, file=out)
    for stage, secs in report.timings.items():
        print(f"time {stage} {secs:.4f}s", file=err)
    if args.certificate:
        try:
            value, sol = exhaustive_confilp(kernel.instance)
        except Infeasible:
            print("no certificate: the kernel has no solution", file=err)
            return EXIT_NO
        if value > kernel.bound:
            print("no certificate: the kernel optimum exceeds its bound", file=err)
            return EXIT_NO
        cert, _ = compact_support(certify(inst, kernel.reduced.lift(sol)))
        Path(args.certificate).write_text(serialize_certificate(cert))
        print(f"certificate entries {cert.support}", file=out)
    return EXIT_OK


def cmd_solve_conflp(args, out, err) -> int:
    inst = _read_instance(args.input)
    try:
        sol = solve_lp_only(inst, args.dp_capacity_budget, args.dp_state_budget)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=out)
        return EXIT_NO
    print(f"value {_fmt(sol.value)}", file=out)
    print(f"support {sol.support}", file=out)
    for (i, c), y in sol.items():
        print(f"({i + 1}, {_vec(c)}, {_fmt(y)})", file=out)
    print(f"iterations {sol.iterations}", file=out)
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    inst = _read_instance(args.input)
    status = EXIT_OK
    if args.kernel:
        if not args.sidecar:
            print("verify: --kernel needs --sidecar", file=err)
            return EXIT_USAGE
        kernel = parse_kernel(Path(args.kernel).read_text(), Path(args.sidecar).read_text(), inst)
        problems = check_kernel_record(kernel)
        if problems:
            print(f"NotEquivalent: {problems[0]}", file=out)
            print("first failing check: record", file=err)
            return EXIT_NO
        verdict = verify_kernel(inst, kernel)
        print(str(verdict), file=out)
        if not verdict.equivalent:
            print("first failing check: " + ("lift" if not verdict.lift_ok else "decision"), file=err)
            status = EXIT_NO
    if args.certificate:
        cert = parse_certificate(Path(args.certificate).read_text())
        rep = verify_certificate(inst, cert)
        for w in rep.warnings:
            print(f"warning: {w}", file=err)
        if rep.ok:
            print(f"certificate valid ({rep.support} entries, bound {rep.support_bound})", file=out)
        else:
            print(f"certificate invalid: {rep.errors[0]}", file=out)
            status = EXIT_NO
    if not args.kernel and not args.certificate:
        print("verify: give --kernel/--sidecar and/or --certificate", file=err)
        return EXIT_USAGE
    return status


def cmd_oracle(args, out, err) -> int:
    inst = _read_instance(args.input)
    opt, witness = brute_schedule(inst, OracleBudget(max_assignments=args.max_assignments))
    print(f"optimum {opt}", file=out)
    print(f"decision {'yes' if opt <= inst.k else 'no'}", file=out)
    for kind, c in witness:
        print(f"machine kind {kind + 1} jobs {_vec(c)}", file=out)
    return EXIT_OK if opt <= inst.k else EXIT_NO


def cmd_graver(args, out, err) -> int:
    A = parse_matrix(Path(args.matrix).read_text())
    basis = graver_basis(A, args.norm_budget)
    for g in basis.elements:
        print(_vec(g), file=out)
    print(f"complete {str(basis.complete).lower()}", file=out)
    print(f"size {len(basis.elements)}", file=out)
    print(f"g_inf {basis.g_inf}", file=out)
    print(f"g_1 {basis.g_1}", file=out)
    print(f"dual graph path {str(is_path(dual_graph(A))).lower()}", file=out)
    bb = basebound(A)
    ok = basis.g_1 <= bb
    print(f"base bound g_1 <= {bb}: {'ok' if ok else 'VIOLATED'}", file=out)
    return EXIT_OK if ok else EXIT_NO


def cmd_ft(args, out, err) -> int:
    try:
        w = [Fraction(tok) for tok in args.weights]
    except (ValueError, ZeroDivisionError):
        print("ft: weights must be rationals p/q", file=err)
        return EXIT_USAGE
    if args.M < 1:
        print("ft: M must be positive", file=err)
        return EXIT_USAGE
    wt = frank_tardos(w, args.M)
    print("reduced " + " ".join(map(str, wt)), file=out)
    if (4 * args.M + 1) ** len(w) <= FT_CHECK_LIMIT:
        ok = sign_equivalent(w, wt, args.M)
        print(f"exhaustive check {'ok' if ok else 'FAILED'}", file=out)
        return EXIT_OK if ok else EXIT_NO
    print("exhaustive check skipped (box too large)", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmkernel", description="Kernels for high-multiplicity scheduling.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernelize", help="run the full pipeline and write kernel plus sidecar")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", help="lifting record path (default: OUT.sidecar)")
    p.add_argument("--proximity-override", type=int, default=None,
                   help="replace the proximity bound P by this value (testing only, voids the guarantee)")
    p.add_argument("--dump-model", help="write the N-fold model of the input here")
    p.add_argument("--certificate", help="solve the kernel and write a certificate here")
    _add_budgets(p)
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("solve-conflp", help="solve the configuration LP only")
    p.add_argument("--in", dest="input", required=True)
    _add_budgets(p)
    p.set_defaults(func=cmd_solve_conflp)

    p = sub.add_parser("verify", help="check a kernel against brute force and/or check a certificate")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kernel")
    p.add_argument("--sidecar")
    p.add_argument("--certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-assignments", type=int, default=OracleBudget().max_assignments)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("graver", help="Graver basis of a small matrix")
    p.add_argument("--matrix", required=True, help="file with one row of integers per line")
    p.add_argument("--norm-budget", type=int, default=None)
    p.set_defaults(func=cmd_graver)

    p = sub.add_parser("ft", help="Frank-Tardos reduction of a rational weight vector")
    p.add_argument("--weights", nargs="+", required=True)
    p.add_argument("--M", type=int, required=True)
    p.set_defaults(func=cmd_ft)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except (InstanceFormatError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=err)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
