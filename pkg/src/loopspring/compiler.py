"""Compilation pipeline between counted loops, tape machines and oscillators.

Forward direction (compile): source text -> counted-loop pattern -> two-state
machine with a unary tape -> oscillator parameters whose friction realises the
trip count -> Lagrangian description of that physical system.

Reverse direction (oscillator_to_tm): oscillator parameters -> the same
machine with a tape holding one ``1`` per cycle the motion can still perform.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import minibasic
from .machine import (MachineConfig, MachineSpec, OSCILLATING,
                      oscillator_machine, unary_tape)
from .minibasic import LoopPattern
from .oscillator import (OscillatorParams, friction_for_count,
                         oscillation_count)


class UnsupportedMachine(ValueError):
    """Machine is not the two-rule oscillator machine (up to state renaming)."""


class EmptyTape(ValueError):
    """A zero-count tape: no finite nonzero friction realises zero cycles."""


@dataclass(frozen=True)
class LagrangianDescription:
    """Coefficients of L = (1/2) m xdot^2 - (1/2) k x^2 plus the friction term.

    The dissipation coefficient sits outside the Lagrangian proper (it enters
    the equations of motion through the velocity), so it is carried alongside.
    """

    kinetic_coefficient: float
    potential_coefficient: float
    dissipation_coefficient: float
    rendered: str


def emit_lagrangian(params):
    """Lagrangian description of the oscillator with the given parameters."""
    kinetic = 0.5 * params.m
    potential = 0.5 * params.k
    rendered = (f"L = {kinetic:.6g}·ẋ² − {potential:.6g}·x²"
                f"  [dissipation {params.mu:.6g}]")
    return LagrangianDescription(kinetic, potential, params.mu, rendered)


def loop_to_tm(pattern):
    """Machine and unary input tape for a counted loop.

    The body contributes no symbols: one tape cell stands for one whole
    iteration, whatever the body does.
    """
    if pattern.count < 1:
        raise ValueError("loop count must be >= 1")
    return oscillator_machine(), unary_tape(pattern.count)


def _state_renaming(machine):
    """Map machine states onto the canonical q0/q1 tokens, or None."""
    canonical = oscillator_machine()
    if machine.alphabet != canonical.alphabet:
        return None
    if len(machine.states) != len(canonical.states):
        return None
    states = sorted(machine.states)
    targets = sorted(canonical.states)
    for mapping in ({states[0]: targets[0], states[1]: targets[1]},
                    {states[0]: targets[1], states[1]: targets[0]}):
        renamed = {
            (mapping[r.qi], r.si, mapping[r.qf], r.sf, r.move)
            for r in machine.rules
        }
        wanted = {(r.qi, r.si, r.qf, r.sf, r.move) for r in canonical.rules}
        if renamed == wanted:
            return mapping
    return None


def tm_to_oscillator(machine, tape_config, m=1.0, k=100.0, gamma0=0.1):
    """Oscillator parameters whose cycle count equals the tape's one-count.

    The machine must be the oscillator machine up to renaming of its two
    state tokens, and the tape a fresh unary input (contiguous ones, head on
    the rightmost one, oscillating state).  A lazily-filled endless tape maps
    to friction zero; an empty tape has no finite-friction realisation and
    raises EmptyTape.
    """
    renaming = _state_renaming(machine)
    if renaming is None:
        raise UnsupportedMachine("not the two-rule oscillator machine")
    tape = tape_config.tape
    if tape.is_unbounded:
        return OscillatorParams(m=m, k=k, mu=0.0, gamma0=gamma0)
    count = tape.one_count()
    if count == 0:
        raise EmptyTape("no finite nonzero friction yields zero oscillations")
    positions = sorted(tape.written_nonblank_positions())
    if positions != list(range(positions[0], positions[0] + count)):
        raise ValueError("tape ones are not contiguous")
    if tape_config.head_pos != positions[-1]:
        raise ValueError("head is not on the rightmost one")
    if renaming[tape_config.state] != OSCILLATING:
        raise ValueError("machine is not in its oscillating state")
    mu = friction_for_count(m, k, gamma0, count)
    return OscillatorParams(m=m, k=k, mu=mu, gamma0=gamma0)


def oscillator_to_tm(params):
    """Machine and tape realised by an oscillator: one ``1`` per cycle.

    Zero friction yields the endless tape (the motion never rests).
    """
    count = oscillation_count(params)
    return oscillator_machine(), unary_tape(count)


@dataclass(frozen=True)
class CompilationResult:
    """Everything the pipeline produced for one source program."""

    pattern: LoopPattern
    machine: MachineSpec
    tape: MachineConfig
    params: OscillatorParams
    lagrangian: LagrangianDescription
    diagnostics: tuple[str, ...]

    def __post_init__(self):
        ones = self.tape.tape.one_count()
        if ones != self.pattern.count:
            raise ValueError(
                f"tape holds {ones} ones but the loop count is {self.pattern.count}")
        cycles = oscillation_count(self.params)
        if cycles != self.pattern.count:
            raise ValueError(
                f"parameters give {cycles} cycles but the loop count is "
                f"{self.pattern.count}")

    def to_dict(self):
        return {
            "pattern": {
                "counter": self.pattern.counter,
                "count": self.pattern.count,
                "body_lines": list(self.pattern.body_lines),
            },
            "machine": self.machine.to_dict(),
            "tape_length": self.pattern.count,
            "params": {
                "m": self.params.m,
                "k": self.params.k,
                "mu": self.params.mu,
                "gamma0": self.params.gamma0,
            },
            "lagrangian": self.lagrangian.rendered,
            "diagnostics": list(self.diagnostics),
        }


def compile(source, m=1.0, k=100.0, gamma0=0.1, overrides=None):
    """Compile counted-loop source text into an oscillator.

    Chains parse -> recognize_loop -> loop_to_tm -> tm_to_oscillator ->
    emit_lagrangian.  The compiled count is the declared loop bound; when
    literal line-by-line execution passes through the body a different
    number of times (the guard runs after the body, so a bound of M yields
    M-1 passes for M >= 2), a diagnostic records both numbers.
    """
    program = minibasic.parse(source)
    pattern = minibasic.recognize_loop(program, overrides)
    machine, tape = loop_to_tm(pattern)
    params = tm_to_oscillator(machine, tape, m=m, k=k, gamma0=gamma0)
    lagrangian = emit_lagrangian(params)
    diagnostics = []
    literal = minibasic.interpret(program, overrides).body_executions
    if literal is not None and literal != pattern.count:
        diagnostics.append(
            f"declared bound is {pattern.count} but literal execution passes "
            f"through the body {literal} time(s); compilation uses the bound")
    return CompilationResult(pattern, machine, tape, params, lagrangian,
                             tuple(diagnostics))
