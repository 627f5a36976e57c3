"""loopspring: counted loops compiled into damped harmonic oscillators.

A counted loop, the two-state machine it lowers to, and a damped oscillator
with the matching friction all perform the same computation: consume one
unary symbol per iteration/oscillation, then stop.  This package parses the
loop language, builds and runs the machine, synthesises and simulates the
oscillator, and checks that the two event traces are identical.
"""

from .compiler import (CompilationResult, EmptyTape, LagrangianDescription,
                       UnsupportedMachine, compile, emit_lagrangian,
                       loop_to_tm, oscillator_to_tm, tm_to_oscillator)
from .equivalence import (CONSUME_ONE, STOP, EventTrace, Verdict,
                          check_bisimulation, physical_event_trace,
                          tm_event_trace)
from .machine import (BLANK, ONE, UNBOUNDED, ExecutionTrace, MachineConfig,
                      MachineSpec, TransitionRule, oscillator_machine,
                      parse_rule, render_trace, run, step, unary_tape)
from .minibasic import (LoopPattern, NotACountedLoop, ParseError, Program,
                        interpret, parse, recognize_loop, render_program)
from .oscillator import (AnalyticMotion, CyclePeak, OscillatorParams,
                         SimConfig, TimeSeries, amplitude_at,
                         analytic_position, cycle_time, cycles_to_threshold,
                         energy, extract_peaks, friction_for_count, integrate,
                         oscillation_count, period)

__version__ = "0.1.0"
