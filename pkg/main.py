from __future__ import annotations

"""CLI entrypoint for time-optimal Grover search control.

Subcommands:
  optimal-times  closed-form bang-singular-bang optimum for an overlap x
  evolve         trajectory of a protocol (state CSV + Bloch CSV)
  verify         Pontryagin conditions along a protocol (CSV + JSON report)
  sweep          optimal / singular / Grover times over qubit counts
  grad-opt       projected gradient ascent on a gridded control
  bloch-arc      samples of the singular arc on the Bloch sphere

Exit codes: 0 success, 1 verification failure, 2 usage/domain error,
3 I/O error.
"""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional

from config import (
    DEFAULT_ARC_SAMPLES,
    DEFAULT_CELLS,
    DEFAULT_MAX_ITER,
    DEFAULT_MULTIBANG_N,
    DEFAULT_SAMPLES,
    DEFAULT_SAMPLES_PER_SEGMENT,
    DEFAULT_TOL_HC,
    DEFAULT_TOL_PHI,
    OUTPUT_DIR,
)
from grover_pmp import bloch, export
from grover_pmp.dynamics import evolve, fidelity, initial_state
from grover_pmp.errors import DomainError
from grover_pmp.models import PmpConfig, Protocol
from grover_pmp.optimizer import gradient_descent, optimize_t1_bsb, optimize_t1_multibang, sweep_times
from grover_pmp.pmp import verify
from grover_pmp.protocols import (
    bang_singular_bang,
    grover_protocol,
    multiple_bang,
    optimal_times,
    singular_protocol,
)
from grover_pmp.utils import log, set_verbose, warn
from parser import load_protocol
from utils import in_pi, parse_time, resolve_overlap

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

PROTOCOL_CHOICES = ["singular", "grover", "bsb", "multibang", "custom"]


def _sibling(path: Path, suffix: str, ext: str) -> Path:
    """output/run.csv -> output/run<suffix>.<ext>"""
    return path.with_name(f"{path.stem}{suffix}.{ext}")


def _default_path(command: str, label: str) -> Path:
    return Path(OUTPUT_DIR) / f"{command}-{label}.csv"


def _build_protocol(args: argparse.Namespace, x: float) -> Protocol:
    """
    Protocol from --protocol and its parameters. Missing t1 values are
    filled in from the closed form (bsb without --tf) or by the 1-D
    optimizer (bsb/multibang with --tf).
    """
    kind = args.protocol
    tf = parse_time(args.tf) if args.tf is not None else None
    t1 = parse_time(args.t1) if args.t1 is not None else None

    if kind == "singular":
        return singular_protocol(x)
    if kind == "grover":
        return grover_protocol(x)
    if kind == "custom":
        if args.protocol_file is None:
            raise DomainError("--protocol custom needs --protocol-file")
        return load_protocol(args.protocol_file)

    if kind == "bsb":
        if tf is None:
            opt = optimal_times(x)
            if t1 is None:
                return bang_singular_bang(opt.t1, opt.t2)
            tf = opt.tf
        if t1 is None:
            t1 = optimize_t1_bsb(x, tf).best_param
            log(f"Optimized t1 = {in_pi(t1)} for tf = {in_pi(tf)}")
        return bang_singular_bang(t1, tf - 2.0 * t1)

    # multibang
    if tf is None:
        raise DomainError("--protocol multibang needs --tf")
    if t1 is None:
        t1 = optimize_t1_multibang(x, tf, args.N).best_param
        log(f"Optimized t1 = {in_pi(t1)} for tf = {in_pi(tf)}, N = {args.N}")
    return multiple_bang(t1, args.N, tf)


# ------------- commands -------------

def cmd_optimal_times(args: argparse.Namespace) -> int:
    x = resolve_overlap(args.x, args.n)
    opt = optimal_times(x)
    if args.format == "json":
        payload = {"x": x, "t1_pi": opt.t1 / math.pi, "t2_pi": opt.t2 / math.pi, "tf_pi": opt.tf / math.pi}
        print(json.dumps(payload, indent=2))
    else:
        print(f"t1* = {in_pi(opt.t1)}")
        print(f"t2* = {in_pi(opt.t2)}")
        print(f"tf* = {in_pi(opt.tf)}")
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace) -> int:
    x = resolve_overlap(args.x, args.n)
    protocol = _build_protocol(args, x)
    if args.samples < 1:
        raise DomainError(f"--samples must be >= 1 for evolve, got {args.samples}")

    log(f"Evolving {protocol.label} protocol ({len(protocol.segments)} segments, tf = {in_pi(protocol.total_time)})...")
    trajectory = evolve(initial_state(x), protocol, x, samples_per_segment=args.samples)

    csv_path = args.output or _default_path("evolve", protocol.label)
    export.write_trajectory_csv(csv_path, trajectory)
    bloch_path = _sibling(csv_path, "_bloch", "csv")
    export.write_bloch_csv(bloch_path, trajectory)
    log(f"Final fidelity {fidelity(trajectory.final):.12f}")
    protocol_path = _sibling(csv_path, "_protocol", "json")
    export.write_protocol_json(protocol_path, protocol)
    log(f"CSV written to {csv_path} and {bloch_path}, protocol to {protocol_path}")

    if args.with_arc:
        arc_path = _sibling(csv_path, "_arc", "csv")
        export.write_arc_csv(arc_path, bloch.singular_arc_samples(x, DEFAULT_ARC_SAMPLES))
        log(f"Singular arc written to {arc_path}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    x = resolve_overlap(args.x, args.n)
    protocol = _build_protocol(args, x)
    config = PmpConfig(tol_phi=args.tol_phi, tol_hc=args.tol_hc, samples=args.samples)

    log(f"Verifying {protocol.label} protocol (tf = {in_pi(protocol.total_time)}, {config.samples} samples)...")
    report = verify(protocol, x, config)

    csv_path = args.output or _default_path("verify", protocol.label)
    json_path = _sibling(csv_path, "_report", "json")
    export.write_verification(csv_path, json_path, report)
    log(f"CSV written to {csv_path}, report to {json_path}")

    if report.degenerate:
        warn("Verification inconclusive: degenerate terminal costate (Psi_0(tf) = 0)")
        return EXIT_VERIFY_FAILED
    if not report.passed:
        log(f"Verification FAILED with {len(report.violations)} violations:")
        for v in report.violations[:20]:
            log(f"  t={in_pi(v.t)}  {v.reason}")
        if len(report.violations) > 20:
            log(f"  ... {len(report.violations) - 20} more in {json_path}")
        return EXIT_VERIFY_FAILED

    log(f"Verification passed: Hc = {report.hc_mean:+.6e} (max deviation {report.hc_max_dev:.3e})")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    log(f"Sweeping n = {args.n_min}..{args.n_max}...")
    rows = sweep_times(args.n_min, args.n_max)
    if args.format == "json":
        export.write_json(args.output, [dict(r.to_row(), grover_fidelity=r.grover_fidelity) for r in rows])
    else:
        export.write_sweep_csv(args.output, rows, in_pi_units=args.pi_units)
    if args.output:
        log(f"Sweep written to {args.output}")
    return EXIT_OK


def cmd_grad_opt(args: argparse.Namespace) -> int:
    x = resolve_overlap(args.x, args.n)
    if args.tf is None:
        raise DomainError("grad-opt needs --tf")
    tf = parse_time(args.tf)

    log(f"Gradient ascent: tf = {in_pi(tf)}, cells = {args.cells}, max_iter = {args.max_iter}...")
    result = gradient_descent(x, tf, cells=args.cells, max_iter=args.max_iter)
    log(f"Final fidelity {result.final_fidelity:.12f} after {result.iterations} iterations")

    export.write_grad_result_json(args.output, result)
    if args.output:
        log(f"JSON written to {args.output}")
    return EXIT_OK


def cmd_bloch_arc(args: argparse.Namespace) -> int:
    x = resolve_overlap(args.x, args.n)
    samples = bloch.singular_arc_samples(x, args.samples)
    if args.format == "json":
        export.write_json(args.output, export.arc_rows(samples))
    else:
        export.write_arc_csv(args.output, samples)
    if args.output:
        log(f"Singular arc written to {args.output}")
    return EXIT_OK


COMMANDS = {
    "optimal-times": cmd_optimal_times,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "grad-opt": cmd_grad_opt,
    "bloch-arc": cmd_bloch_arc,
}


def _add_protocol_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=PROTOCOL_CHOICES, default="bsb")
    p.add_argument("--tf", help="Total time, e.g. 1.3pi")
    p.add_argument("--t1", help="Bang duration, e.g. 0.3918pi (optimized when omitted)")
    p.add_argument("--N", type=int, default=DEFAULT_MULTIBANG_N, help="Alternations for --protocol multibang")
    p.add_argument("--protocol-file", type=Path, help="JSON protocol for --protocol custom")


def _add_common_args(p: argparse.ArgumentParser, suppress: bool) -> None:
    """
    Global options. The subcommand copies use SUPPRESS defaults so a value
    given before the subcommand is not overwritten by the subparser.
    """
    def default(value):
        return argparse.SUPPRESS if suppress else value

    group = p.add_mutually_exclusive_group()
    group.add_argument("--x", type=float, default=default(None), help="Overlap <s|w> in (0, 1)")
    group.add_argument("--n", type=int, default=default(None), help="Qubit count; x = 2^(-n/2)")

    p.add_argument(
        "--output", type=Path, default=default(None),
        help="Output file (stdout for single-file commands when omitted)",
    )
    p.add_argument("--format", choices=["csv", "json"], default=default("csv"))
    p.add_argument(
        "--verbose", action="store_true", default=default(False),
        help="Print optimizer and verifier diagnostics",
    )


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Time-optimal control of Grover search")
    _add_common_args(p, suppress=False)

    # --x, --n, --output, ... are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_common_args(common, suppress=True)

    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("optimal-times", parents=[common], help="Closed-form t1*, t2*, tf*")

    ev = sub.add_parser("evolve", parents=[common], help="Trajectory CSV of a protocol")
    _add_protocol_args(ev)
    ev.add_argument("--samples", type=int, default=DEFAULT_SAMPLES_PER_SEGMENT, help="Samples per segment")
    ev.add_argument("--with-arc", action="store_true", help="Also write singular-arc samples")

    ve = sub.add_parser("verify", parents=[common], help="Check Pontryagin conditions along a protocol")
    _add_protocol_args(ve)
    ve.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Uniform samples over [0, tf]")
    ve.add_argument("--tol-phi", type=float, default=DEFAULT_TOL_PHI)
    ve.add_argument("--tol-hc", type=float, default=DEFAULT_TOL_HC)

    sw = sub.add_parser("sweep", parents=[common], help="Optimal / singular / Grover times over qubit counts")
    sw.add_argument("--n-min", type=int, default=1)
    sw.add_argument("--n-max", type=int, default=40)
    sw.add_argument("--pi-units", action="store_true", help="Write times in units of pi")

    go = sub.add_parser("grad-opt", parents=[common], help="Projected gradient ascent on a gridded control")
    go.add_argument("--tf", help="Total time, e.g. 1.567pi")
    go.add_argument("--cells", type=int, default=DEFAULT_CELLS)
    go.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)

    ba = sub.add_parser("bloch-arc", parents=[common], help="Singular arc theta(phi)")
    ba.add_argument("--samples", type=int, default=DEFAULT_ARC_SAMPLES)

    return p.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    set_verbose(args.verbose)

    try:
        return COMMANDS[args.command](args)
    except ValueError as e:
        # DomainError and its subclasses land here too
        log(f"ERROR: {e}")
        return EXIT_USAGE
    except OSError as e:
        log(f"I/O ERROR: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
