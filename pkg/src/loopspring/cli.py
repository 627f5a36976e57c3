"""Command-line front end for the compile/run/simulate/verify pipeline.

Exit codes: 0 success (or traces equivalent), 1 traces verified but unequal,
2 input error (bad source, bad flags, bad files).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import compiler, equivalence, minibasic, oscillator
from .machine import render_trace, run, unary_tape
from .minibasic import Assign, Line, Num, Program
from .oscillator import OscillatorParams, SimConfig

_INPUT_ERRORS = (
    minibasic.ParseError,
    minibasic.NotACountedLoop,
    minibasic.StepBudgetExhausted,
    minibasic.EvalError,
    compiler.UnsupportedMachine,
    compiler.EmptyTape,
    oscillator.DomainError,
    oscillator.OverdampedError,
    oscillator.StepSizeError,
    oscillator.NoPeaksError,
    OSError,
)

# Relative widening of the oscillation class used when classifying measured
# amplitudes; see equivalence.physical_event_trace.
_VERIFY_SLACK = 1e-6

_VERIFY_X0 = -5.0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="loopspring",
        description="Compile counted loops to damped oscillators and verify "
                    "that both run the same computation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a counted-loop source file")
    p.add_argument("source", help="path of the source file")
    p.add_argument("--m", type=float, default=1.0, help="mass, kg")
    p.add_argument("--k", type=float, default=100.0, help="stiffness, N/m")
    p.add_argument("--gamma0", type=float, default=0.1,
                   help="halting amplitude-ratio threshold")

    p = sub.add_parser("run-tm", help="run the oscillator machine on a unary tape")
    p.add_argument("--count", type=int, required=True,
                   help="number of ones on the tape")
    p.add_argument("--max-steps", type=int, default=10_000)

    p = sub.add_parser("simulate", help="integrate the oscillator and write CSV/SVG")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--k", type=float, default=100.0)
    p.add_argument("--mu", type=float, default=0.73)
    p.add_argument("--x0", type=float, default=-5.0)
    p.add_argument("--v0", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--t-max", type=float, default=8.0)
    p.add_argument("--gamma0", type=float, default=0.1)
    p.add_argument("--out-csv", required=True, help="trajectory CSV path")
    p.add_argument("--out-svg", default=None, help="optional x(t) plot path")

    p = sub.add_parser("verify", help="check loop/oscillator trace equivalence")
    p.add_argument("source", help="path of the source file")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--k", type=float, default=100.0)
    p.add_argument("--gamma0", type=float, default=0.1)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--check-gamma0", type=float, default=None,
                   help="threshold used when classifying the simulated "
                        "amplitudes (defaults to --gamma0; setting it apart "
                        "exposes a tampered threshold as a mismatch)")
    p.add_argument("--sweep", default=None, metavar="A..B",
                   help="re-run the file's loop with every count in A..B")
    return parser


def cmd_compile(args):
    with open(args.source) as fh:
        source = fh.read()
    result = compiler.compile(source, m=args.m, k=args.k, gamma0=args.gamma0)
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def cmd_run_tm(args):
    if args.count < 0:
        raise oscillator.DomainError("--count must be non-negative")
    spec = compiler.oscillator_machine()
    trace = run(spec, unary_tape(args.count), max_steps=args.max_steps)
    print(render_trace(trace))
    return 0


def _write_svg(series, path, width=900, height=360, max_points=2000):
    """Single polyline of x against t with plain axis lines."""
    stride = max(1, len(series) // max_points)
    t = series.t[::stride]
    x = series.x[::stride]
    pad = 30
    t_span = t[-1] - t[0] or 1.0
    x_lo, x_hi = float(x.min()), float(x.max())
    x_span = (x_hi - x_lo) or 1.0
    xs = pad + (t - t[0]) / t_span * (width - 2 * pad)
    ys = height - pad - (x - x_lo) / x_span * (height - 2 * pad)
    points = " ".join(f"{px:.2f},{py:.2f}" for px, py in zip(xs, ys))
    y_zero = height - pad - (0.0 - x_lo) / x_span * (height - 2 * pad)
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'  <line x1="{pad}" y1="{y_zero:.2f}" x2="{width - pad}" y2="{y_zero:.2f}" '
        f'stroke="black" stroke-width="1"/>\n'
        f'  <line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" '
        f'stroke="black" stroke-width="1"/>\n'
        f'  <polyline points="{points}" fill="none" stroke="steelblue" '
        f'stroke-width="1"/>\n'
        f'</svg>\n'
    )
    with open(path, "w") as fh:
        fh.write(svg)


def cmd_simulate(args):
    params = OscillatorParams(m=args.m, k=args.k, mu=args.mu, gamma0=args.gamma0)
    sim = SimConfig(x0=args.x0, v0=args.v0, dt=args.dt, t_max=args.t_max)
    series = oscillator.integrate(params, sim)
    series.write_csv(args.out_csv)
    if args.out_svg:
        _write_svg(series, args.out_svg)
    peaks = oscillator.extract_peaks(series)
    doc = oscillator.peaks_document(params, peaks)
    a0 = abs(args.x0)
    ratios = [p.amplitude / a0 for p in peaks]
    if any(r <= args.gamma0 for r in ratios):
        doc["qualifying_cycles"] = sum(1 for r in ratios if r > args.gamma0)
    else:
        doc["qualifying_cycles"] = "unbounded (no threshold crossing within horizon)"
    print(json.dumps(doc, indent=2))
    return 0


def _with_count(program, count):
    """Copy of a counted-loop program with its declared bound replaced."""
    init = program.lines[0]
    new_init = Line(init.number, Assign(init.stmt.var, Num(count)))
    return Program((new_init,) + program.lines[1:])


def verify_source(source, m=1.0, k=100.0, gamma0=0.1, dt=1e-4, check_gamma0=None):
    """Full pipeline on one source text; returns (verdict, result)."""
    result = compiler.compile(source, m=m, k=k, gamma0=gamma0)
    count = result.pattern.count
    machine_events = equivalence.tm_event_trace(
        run(result.machine, result.tape, max_steps=count + 10))
    params = result.params
    check = gamma0 if check_gamma0 is None else check_gamma0
    # simulate two spare cycles past the stop predicted at the *check*
    # threshold, so the crossing peak is always observed
    check_count = oscillator.oscillation_count(
        OscillatorParams(m=params.m, k=params.k, mu=params.mu, gamma0=check))
    horizon = (check_count + 2) * oscillator.period(params)
    series = oscillator.integrate(
        params, SimConfig(x0=_VERIFY_X0, v0=0.0, dt=dt, t_max=horizon))
    peaks = oscillator.extract_peaks(series)
    physics_events = equivalence.physical_event_trace(
        peaks, a0=abs(_VERIFY_X0), gamma0=check,
        run_complete=True, boundary_slack=_VERIFY_SLACK)
    return equivalence.check_bisimulation(machine_events, physics_events), result


def cmd_verify(args):
    with open(args.source) as fh:
        source = fh.read()
    if args.sweep is None:
        verdict, _ = verify_source(source, m=args.m, k=args.k,
                                   gamma0=args.gamma0, dt=args.dt,
                                   check_gamma0=args.check_gamma0)
        print(verdict.describe())
        return 0 if verdict.equal else 1
    try:
        lo, hi = (int(part) for part in args.sweep.split("..", 1))
    except ValueError:
        raise oscillator.DomainError(f"--sweep expects A..B (got {args.sweep!r})")
    if lo < 1 or hi < lo:
        raise oscillator.DomainError(f"--sweep range {args.sweep!r} is empty or invalid")
    program = minibasic.parse(source)
    minibasic.recognize_loop(program)  # must be a counted loop before sweeping
    all_equal = True
    for count in range(lo, hi + 1):
        text = minibasic.render_program(_with_count(program, count))
        verdict, _ = verify_source(text, m=args.m, k=args.k, gamma0=args.gamma0,
                                   dt=args.dt, check_gamma0=args.check_gamma0)
        print(f"M={count} {verdict.describe()}")
        all_equal = all_equal and verdict.equal
    return 0 if all_equal else 1


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "compile": cmd_compile,
        "run-tm": cmd_run_tm,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
