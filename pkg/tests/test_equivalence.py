import pytest

from loopspring.compiler import compile, loop_to_tm, tm_to_oscillator
from loopspring.equivalence import (CONSUME_ONE, SOURCE_MACHINE,
                                    SOURCE_PHYSICS, STOP, EventTrace,
                                    ForeignRule, check_bisimulation,
                                    physical_event_trace, tm_event_trace)
from loopspring.machine import (BLANK, ONE, RIGHT, UNBOUNDED, TransitionRule,
                                ExecutionTrace, HaltReason, oscillator_machine,
                                run, unary_tape)
from loopspring.minibasic import LoopPattern
from loopspring.oscillator import (CyclePeak, OscillatorParams, SimConfig,
                                   amplitude_at, extract_peaks,
                                   friction_for_count, integrate, period)

PAPER = OscillatorParams(m=1.0, k=100.0, mu=0.73, gamma0=0.1)


def machine_events(count, budget=None):
    trace = run(oscillator_machine(), unary_tape(count),
                max_steps=budget if budget else int(count) + 10)
    return tm_event_trace(trace)


# --- EventTrace construction --------------------------------------------------

def test_stop_must_be_final():
    with pytest.raises(ValueError, match="final"):
        EventTrace((STOP, CONSUME_ONE), SOURCE_MACHINE)
    with pytest.raises(ValueError, match="unknown event"):
        EventTrace(("tick",), SOURCE_MACHINE)
    with pytest.raises(ValueError, match="unknown source"):
        EventTrace((STOP,), "oracle")


# --- machine-side traces ---------------------------------------------------------

def test_tm_events_m10():
    trace = machine_events(10)
    assert trace.events == (CONSUME_ONE,) * 10 + (STOP,)
    assert trace.consume_count == 10
    assert trace.source == SOURCE_MACHINE


def test_tm_events_m0_is_stop_only():
    assert machine_events(0).events == (STOP,)


def test_tm_events_budget_exhaustion_has_no_stop():
    trace = machine_events(UNBOUNDED, budget=500)
    assert trace.events == (CONSUME_ONE,) * 500
    assert STOP not in trace.events


def test_tm_events_reject_foreign_rules():
    foreign = TransitionRule("q1", ONE, "q1", ONE, RIGHT)
    fake = ExecutionTrace(configs=(unary_tape(1),) * 2, applied_rules=(foreign,),
                          halted=False, halt_reason=HaltReason.STEP_BUDGET_EXHAUSTED)
    with pytest.raises(ForeignRule):
        tm_event_trace(fake)


# --- physics-side traces -----------------------------------------------------------

def test_physical_events_paper_run():
    series = integrate(PAPER, SimConfig(x0=-5.0, v0=0.0, dt=1e-4, t_max=8.0))
    trace = physical_event_trace(extract_peaks(series), a0=5.0, gamma0=0.1,
                                 run_complete=True)
    assert trace.events == (CONSUME_ONE,) * 10 + (STOP,)
    assert trace.source == SOURCE_PHYSICS


def test_physical_events_undamped_truncated_run():
    free = OscillatorParams(m=1.0, k=100.0, mu=0.0, gamma0=0.1)
    series = integrate(free, SimConfig(x0=-5.0, v0=0.0, dt=period(free) / 500,
                                       t_max=5.2 * period(free)))
    trace = physical_event_trace(extract_peaks(series), a0=5.0, gamma0=0.1,
                                 run_complete=False)
    assert trace.events == (CONSUME_ONE,) * 5
    assert STOP not in trace.events


def test_physical_events_complete_run_stops_at_series_end():
    free = OscillatorParams(m=1.0, k=100.0, mu=0.0, gamma0=0.1)
    series = integrate(free, SimConfig(x0=-5.0, v0=0.0, dt=period(free) / 500,
                                       t_max=3.2 * period(free)))
    trace = physical_event_trace(extract_peaks(series), a0=5.0, gamma0=0.1,
                                 run_complete=True)
    assert trace.events == (CONSUME_ONE,) * 3 + (STOP,)


def test_physical_events_boundary_cycle():
    # friction from the count inversion puts cycle 6 exactly on the threshold;
    # with closed-form amplitudes the raw classification may stop at 6 or 7
    mu = friction_for_count(1.0, 100.0, 0.1, 6)
    params = OscillatorParams(m=1.0, k=100.0, mu=mu, gamma0=0.1)
    peaks = [CyclePeak(i, i * period(params), amplitude_at(params, 5.0, i))
             for i in range(1, 9)]
    trace = physical_event_trace(peaks, a0=5.0, gamma0=0.1, run_complete=True)
    assert trace.events[-1] == STOP
    assert trace.consume_count in (5, 6)
    # the slack used for verification classifies the boundary cycle as
    # oscillating, deterministically
    slack = physical_event_trace(peaks, a0=5.0, gamma0=0.1, run_complete=True,
                                 boundary_slack=1e-6)
    assert slack.events == (CONSUME_ONE,) * 6 + (STOP,)


def test_physical_events_scale_invariance():
    base = integrate(PAPER, SimConfig(x0=-5.0, v0=0.0, dt=1e-4, t_max=8.0))
    doubled = integrate(PAPER, SimConfig(x0=-10.0, v0=0.0, dt=1e-4, t_max=8.0))
    a = physical_event_trace(extract_peaks(base), 5.0, 0.1, run_complete=True)
    b = physical_event_trace(extract_peaks(doubled), 10.0, 0.1, run_complete=True)
    assert a.events == b.events


def test_physical_events_reject_nonpositive_a0():
    with pytest.raises(ValueError):
        physical_event_trace([], a0=0.0, gamma0=0.1, run_complete=True)


# --- bisimulation ---------------------------------------------------------------------

def test_equal_traces():
    a = EventTrace((CONSUME_ONE,) * 10 + (STOP,), SOURCE_MACHINE)
    b = EventTrace((CONSUME_ONE,) * 10 + (STOP,), SOURCE_PHYSICS)
    verdict = check_bisimulation(a, b)
    assert verdict.equal
    assert verdict.detail is None
    assert verdict.describe() == "EQUIVALENT: 10 iterations = 10 oscillations"


def test_mismatch_at_first_event():
    a = EventTrace((STOP,), SOURCE_MACHINE)
    b = EventTrace((CONSUME_ONE, STOP), SOURCE_PHYSICS)
    verdict = check_bisimulation(a, b)
    assert not verdict.equal
    assert verdict.detail.index == 0
    assert verdict.detail.expected == STOP
    assert verdict.detail.found == CONSUME_ONE
    assert "NOT EQUIVALENT" in verdict.describe()


def test_mismatch_when_one_trace_ends():
    a = EventTrace((CONSUME_ONE,), SOURCE_MACHINE)
    b = EventTrace((CONSUME_ONE, STOP), SOURCE_PHYSICS)
    verdict = check_bisimulation(a, b)
    assert not verdict.equal
    assert verdict.detail.index == 1
    assert verdict.detail.expected is None
    assert verdict.detail.found == STOP


def test_verdict_is_symmetric():
    cases = [
        (EventTrace((CONSUME_ONE, STOP), SOURCE_MACHINE),
         EventTrace((CONSUME_ONE, STOP), SOURCE_PHYSICS)),
        (EventTrace((STOP,), SOURCE_MACHINE),
         EventTrace((CONSUME_ONE, STOP), SOURCE_PHYSICS)),
        (EventTrace((), SOURCE_MACHINE),
         EventTrace((CONSUME_ONE,), SOURCE_PHYSICS)),
    ]
    for a, b in cases:
        assert check_bisimulation(a, b).equal == check_bisimulation(b, a).equal


def test_serialisation_documents():
    a = EventTrace((CONSUME_ONE, STOP), SOURCE_MACHINE)
    b = EventTrace((STOP,), SOURCE_PHYSICS)
    assert a.to_dict() == {"source": "machine", "events": ["consume_one", "stop"]}
    doc = check_bisimulation(a, b).to_dict()
    assert doc["equal"] is False
    assert doc["mismatch"]["index"] == 0


# --- the headline property, machine vs physics -------------------------------------------

@pytest.mark.parametrize("count", [1, 2, 3, 5, 8, 13])
def test_machine_and_physics_agree(count, make_listing):
    result = compile(make_listing(count))
    machine_trace = tm_event_trace(run(result.machine, result.tape,
                                       max_steps=count + 10))
    T = period(result.params)
    series = integrate(result.params,
                       SimConfig(x0=-5.0, v0=0.0, dt=1e-4, t_max=(count + 2) * T))
    physics_trace = physical_event_trace(extract_peaks(series), a0=5.0,
                                         gamma0=0.1, run_complete=True,
                                         boundary_slack=1e-6)
    verdict = check_bisimulation(machine_trace, physics_trace)
    assert verdict.equal, verdict.describe()
    assert machine_trace.consume_count == count
