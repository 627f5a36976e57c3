"""Symbolic event traces and trace-equivalence checking.

Both a machine run and a physical trajectory reduce to the same event
alphabet: a sequence of CONSUME_ONE events (one per performed iteration /
oscillation cycle) optionally terminated by a single STOP.  Two systems are
trace-equivalent when their event sequences are identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .machine import CONSUME_RULE, REST_RULE

CONSUME_ONE = "consume_one"
STOP = "stop"

SOURCE_MACHINE = "machine"
SOURCE_PHYSICS = "physics"

_SOURCE_NOUN = {SOURCE_MACHINE: "iterations", SOURCE_PHYSICS: "oscillations"}


class ForeignRule(ValueError):
    """The run applied a rule that is not part of the oscillator machine."""


@dataclass(frozen=True)
class EventTrace:
    events: tuple[str, ...]
    source: str

    def __post_init__(self):
        if self.source not in (SOURCE_MACHINE, SOURCE_PHYSICS):
            raise ValueError(f"unknown source {self.source!r}")
        for i, event in enumerate(self.events):
            if event not in (CONSUME_ONE, STOP):
                raise ValueError(f"unknown event {event!r}")
            if event == STOP and i != len(self.events) - 1:
                raise ValueError("stop may only appear as the final event")

    @property
    def consume_count(self):
        return sum(1 for e in self.events if e == CONSUME_ONE)

    def to_dict(self):
        return {"source": self.source, "events": list(self.events)}


def tm_event_trace(trace):
    """Events of an oscillator-machine run.

    Each application of the consume rule emits CONSUME_ONE; the rest rule
    emits STOP.  A budget-exhausted run never applied the rest rule and so
    carries no STOP.
    """
    events = []
    for rule in trace.applied_rules:
        if rule == CONSUME_RULE:
            events.append(CONSUME_ONE)
        elif rule == REST_RULE:
            events.append(STOP)
        else:
            raise ForeignRule(f"rule {rule.render()} is not an oscillator-machine rule")
    return EventTrace(tuple(events), SOURCE_MACHINE)


def physical_event_trace(peaks, a0, gamma0, run_complete, boundary_slack=0.0):
    """Classify per-cycle amplitudes into oscillation events.

    Cycles with A_i/a0 above gamma0 emit CONSUME_ONE; the first cycle at or
    below the threshold emits STOP and ends the trace.  If every observed
    cycle stayed above threshold, STOP is appended only when run_complete
    says the trajectory was simulated to rest (a truncated run, like an
    undamped one, ends without STOP).

    boundary_slack widens the oscillation class to ratios down to
    gamma0*(1 - boundary_slack).  Friction produced by the count inversion
    puts the final qualifying cycle exactly on the threshold, where raw
    comparison of a *measured* amplitude would be decided by integration
    noise; a slack well above that noise (and far below the gap between
    consecutive cycle ratios) keeps the classification deterministic.
    """
    if a0 <= 0:
        raise ValueError("a0 must be positive")
    cutoff = gamma0 * (1.0 - boundary_slack)
    events = []
    for peak in peaks:
        if peak.amplitude / a0 > cutoff:
            events.append(CONSUME_ONE)
        else:
            events.append(STOP)
            return EventTrace(tuple(events), SOURCE_PHYSICS)
    if run_complete:
        events.append(STOP)
    return EventTrace(tuple(events), SOURCE_PHYSICS)


@dataclass(frozen=True)
class TraceMismatch:
    index: int
    expected: str | None
    found: str | None


@dataclass(frozen=True)
class Verdict:
    """Outcome of comparing two event traces element-wise."""

    equal: bool
    left_source: str
    right_source: str
    left_consume: int
    right_consume: int
    detail: TraceMismatch | None = None

    def describe(self):
        left_noun = _SOURCE_NOUN.get(self.left_source, "events")
        right_noun = _SOURCE_NOUN.get(self.right_source, "events")
        if self.equal:
            return (f"EQUIVALENT: {self.left_consume} {left_noun} = "
                    f"{self.right_consume} {right_noun}")
        d = self.detail
        expected = d.expected if d.expected is not None else "end of trace"
        found = d.found if d.found is not None else "end of trace"
        return (f"NOT EQUIVALENT: first divergence at event {d.index} "
                f"(expected {expected}, found {found}); "
                f"{self.left_consume} {left_noun} vs {self.right_consume} {right_noun}")

    def to_dict(self):
        doc = {
            "equal": self.equal,
            "left": {"source": self.left_source, "consume_ones": self.left_consume},
            "right": {"source": self.right_source, "consume_ones": self.right_consume},
        }
        if self.detail is not None:
            doc["mismatch"] = {
                "index": self.detail.index,
                "expected": self.detail.expected,
                "found": self.detail.found,
            }
        return doc


def check_bisimulation(a, b):
    """Element-wise equality of two event traces.

    On mismatch the verdict's detail holds the first diverging index and the
    event each side produced there (None when one trace simply ended).
    """
    detail = None
    if a.events != b.events:
        limit = min(len(a.events), len(b.events))
        index = limit
        for i in range(limit):
            if a.events[i] != b.events[i]:
                index = i
                break
        expected = a.events[index] if index < len(a.events) else None
        found = b.events[index] if index < len(b.events) else None
        detail = TraceMismatch(index, expected, found)
    return Verdict(
        equal=detail is None,
        left_source=a.source,
        right_source=b.source,
        left_consume=a.consume_count,
        right_consume=b.consume_count,
        detail=detail,
    )
