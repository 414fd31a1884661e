"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .errors import FidelityBalanceError
from .fidelity import (
    estimation_fidelity_optimal,
    mc_estimation_fidelity,
    mc_operation_fidelity,
    operation_fidelity,
    optimal_guesses,
)
from .frontier import bound_check, ellipse_residual, extremal_operation, frontier_curve
from .operations import COMPLETENESS_TOL, dumps_operation, loads_operation, validate
from .teleport import (
    SchmidtSpectrum,
    optimal_schmidt,
    teleport_estimation_fidelity,
    teleport_fidelity,
    teleport_tradeoff_check,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        return loads_operation(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_validate(args) -> int:
    op = _load(args.input)
    residual = validate(op)
    ok = residual <= args.tol
    print(f"residual {residual:.3e}")
    print("valid" if ok else f"invalid: residual exceeds {args.tol:.1e}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fidelity(args) -> int:
    op = _load(args.input)
    residual = validate(op)
    if residual > COMPLETENESS_TOL:
        print(f"invalid operation: residual {residual:.3e}", file=sys.stderr)
        return EXIT_FAIL
    F = operation_fidelity(op)
    G = estimation_fidelity_optimal(op)
    verdict = bound_check(F, G, op.dim)
    print(f"d={op.dim} N={op.n_outcomes}")
    print(f"F={F:.12g}")
    print(f"G={G:.12g}")
    print(f"slack={verdict.slack:.6e} {'satisfied' if verdict.satisfied else 'VIOLATED'}")
    if args.mc_samples:
        mf = mc_operation_fidelity(op, args.mc_samples, args.seed)
        mg = mc_estimation_fidelity(op, optimal_guesses(op), args.mc_samples, args.seed)
        print(f"F_mc={mf.mean:.12g} +- {mf.std_error:.3e}")
        print(f"G_mc={mg.mean:.12g} +- {mg.std_error:.3e}")
    return EXIT_OK if verdict.satisfied else EXIT_FAIL


def cmd_frontier(args) -> int:
    d = args.dim
    curve = frontier_curve(d, args.points)
    worst = max(abs(ellipse_residual(p.F_max, p.G, d)) for p in curve)
    if args.rescale:
        header = ["G_rescaled", "F_rescaled"]
        rows = [((d + 1) * p.G - 1, (d + 1) * p.F_max - 1) for p in curve]
    else:
        header = ["G", "F_max"]
        rows = [(p.G, p.F_max) for p in curve]
    try:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([f"{x:.12g}" for x in row] for row in rows)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from exc
    print(f"wrote {len(rows)} rows to {args.out}")
    print(f"max |ellipse residual| {worst:.3e}")
    return EXIT_OK


def cmd_extremal(args) -> int:
    op = extremal_operation(args.dim, args.g)
    _write_text(args.out, dumps_operation(op) + "\n")
    F = operation_fidelity(op)
    G = estimation_fidelity_optimal(op)
    print(f"wrote {op.n_outcomes} Kraus operators to {args.out}")
    print(f"F={F:.12g} G={G:.12g} slack={bound_check(F, G, op.dim).slack:.3e}")
    return EXIT_OK


def _parse_schmidt(text: str, d: int) -> SchmidtSpectrum:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--schmidt: {exc}") from exc
    if len(values) > d:
        raise UsageError(f"--schmidt has {len(values)} entries for --dim {d}")
    if any(v < 0 or v != v or v in (float("inf"), float("-inf")) for v in values):
        raise UsageError("--schmidt entries must be finite and nonnegative")
    norm2 = sum(v * v for v in values)
    if norm2 == 0:
        raise UsageError("--schmidt entries are all zero")
    values += [0.0] * (d - len(values))
    # coefficients are taken up to normalization
    return SchmidtSpectrum.from_coefficients([v / norm2**0.5 for v in values])


def cmd_teleport(args) -> int:
    if args.mu0 is not None:
        mu = optimal_schmidt(args.mu0, args.dim)
    else:
        mu = _parse_schmidt(args.schmidt, args.dim)
    verdict = teleport_tradeoff_check(mu)
    print("mu=" + ",".join(f"{m:.12g}" for m in mu.coefficients))
    print(f"F_tele={teleport_fidelity(mu):.12g}")
    print(f"G_tele={teleport_estimation_fidelity(mu):.12g}")
    print(f"slack={verdict.slack:.6e} {'satisfied' if verdict.satisfied else 'VIOLATED'}")
    return EXIT_OK if verdict.satisfied else EXIT_FAIL


def cmd_mc_check(args) -> int:
    op = _load(args.input)
    residual = validate(op)
    if residual > COMPLETENESS_TOL:
        print(f"invalid operation: residual {residual:.3e}", file=sys.stderr)
        return EXIT_FAIL
    F = operation_fidelity(op)
    G = estimation_fidelity_optimal(op)
    mf = mc_operation_fidelity(op, args.samples, args.seed, workers=args.workers)
    mg = mc_estimation_fidelity(op, optimal_guesses(op), args.samples, args.seed, workers=args.workers)
    ok = True
    for name, closed, est in (("F", F, mf), ("G", G, mg)):
        agree = est.agrees_with(closed)
        ok &= agree
        sigmas = abs(closed - est.mean) / est.std_error if est.std_error > 0 else 0.0
        print(
            f"{name}: closed={closed:.12g} mc={est.mean:.12g} se={est.std_error:.3e} "
            f"dev={sigmas:.2f}sigma {'ok' if agree else 'MISMATCH'}"
        )
    print(f"samples={args.samples} seed={args.seed} {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fidelity-balance",
        description="Operation vs. estimation fidelity of quantum operations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the completeness relation of an operation file")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=COMPLETENESS_TOL)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fidelity", help="closed-form F and optimal G, with optional MC")
    p.add_argument("input")
    p.add_argument("--mc-samples", type=_positive_int, default=None)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("frontier", help="write the F_max(G) boundary as CSV")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", required=True)
    p.add_argument("--rescale", action="store_true", help="emit ((d+1)G-1, (d+1)F-1)")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("extremal", help="write a boundary-saturating operation as JSON")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("teleport", help="teleportation fidelities for a Schmidt spectrum")
    p.add_argument("--dim", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--mu0", type=float)
    group.add_argument("--schmidt", help='comma-separated coefficients, e.g. "0.8,0.6"')
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("mc-check", help="compare closed forms against Haar Monte Carlo")
    p.add_argument("--input", required=True)
    p.add_argument("--samples", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_mc_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "dim", 2) < 2:
        parser.error("--dim must be >= 2")
    if getattr(args, "points", 2) < 2:
        parser.error("--points must be >= 2")
    try:
        return args.func(args)
    except (UsageError, FidelityBalanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
