"""Deterministic single-tape machines with a two-symbol countdown flavour.

The module provides the generic pieces (symbols, rules, specs, configurations,
stepping, bounded runs) plus the concrete two-state machine whose computation
mirrors a damped oscillator: one rule consumes a ``1`` from the tape and keeps
oscillating, the other parks the head in the rest state when it reads a blank.

Tape cells hold short printable tokens; unwritten cells read blank.  A tape may
optionally be filled with ``1`` everywhere left of a frontier, which models an
inexhaustible input without materialising it (runs are always step-bounded).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum

BLANK = "_"
ONE = "1"

LEFT = "-"
RIGHT = "+"
STAY = "0"

_MOVE_OFFSET = {LEFT: -1, RIGHT: 1, STAY: 0}

#: Passing this as a tape count produces the lazily-filled endless tape.
UNBOUNDED = math.inf

# Tokens appear in rendered traces between "|", "<", ">" and "," separators.
_TOKEN_RE = re.compile(r"[^\s|,<>]+\Z")


class MalformedConfig(Exception):
    """A configuration references states or symbols its spec never declared."""


def _check_token(kind, token):
    if not isinstance(token, str) or not _TOKEN_RE.match(token):
        raise ValueError(f"invalid {kind} token: {token!r}")


@dataclass(frozen=True)
class TransitionRule:
    """One instruction: in state `qi` reading `si`, write `sf`, move, enter `qf`."""

    qi: str
    si: str
    qf: str
    sf: str
    move: str

    def __post_init__(self):
        for kind, token in (("state", self.qi), ("state", self.qf),
                            ("symbol", self.si), ("symbol", self.sf)):
            _check_token(kind, token)
        if self.move not in _MOVE_OFFSET:
            raise ValueError(f"move must be one of -,+,0 (got {self.move!r})")

    def render(self):
        return f"<{self.qi},{self.si},{self.qf},{self.sf},{self.move}>"


_RULE_RE = re.compile(
    r"<([^\s|,<>]+),([^\s|,<>]+),([^\s|,<>]+),([^\s|,<>]+),([-+0])>\Z")


def parse_rule(text):
    """Inverse of TransitionRule.render."""
    m = _RULE_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a rule string: {text!r}")
    return TransitionRule(*m.groups())


@dataclass(frozen=True)
class MachineSpec:
    """Declared states, alphabet and a deterministic rule table.

    Halting is implicit: a (state, symbol) pair with no matching rule stops
    the machine.  Construction rejects duplicate (qi, si) pairs and rules
    that mention undeclared states or symbols.
    """

    states: frozenset[str]
    alphabet: frozenset[str]
    rules: tuple[TransitionRule, ...]
    _table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "rules", tuple(self.rules))
        for s in self.states:
            _check_token("state", s)
        for s in self.alphabet:
            _check_token("symbol", s)
        if BLANK not in self.alphabet:
            raise ValueError("alphabet must contain the blank symbol")
        table = {}
        for rule in self.rules:
            for state in (rule.qi, rule.qf):
                if state not in self.states:
                    raise ValueError(f"rule {rule.render()} uses undeclared state {state!r}")
            for sym in (rule.si, rule.sf):
                if sym not in self.alphabet:
                    raise ValueError(f"rule {rule.render()} uses undeclared symbol {sym!r}")
            key = (rule.qi, rule.si)
            if key in table:
                raise ValueError(f"nondeterministic spec: two rules for {key}")
            table[key] = rule
        object.__setattr__(self, "_table", table)

    def rule_for(self, state, symbol):
        """Matching rule for (state, symbol), or None if the machine halts."""
        return self._table.get((state, symbol))

    def to_dict(self):
        return {
            "states": sorted(self.states),
            "alphabet": sorted(self.alphabet),
            "blank": BLANK,
            "rules": [rule.render() for rule in self.rules],
        }


@dataclass(frozen=True)
class Tape:
    """Sparse tape; cells read blank unless written.

    When `fill_one_below` is set, any unwritten cell at or left of that index
    reads ``1`` instead, giving an endless supply of ones.  Writes always
    shadow the fill.
    """

    cells: dict = field(default_factory=dict)
    fill_one_below: int | None = None

    def read(self, pos):
        sym = self.cells.get(pos)
        if sym is not None:
            return sym
        if self.fill_one_below is not None and pos <= self.fill_one_below:
            return ONE
        return BLANK

    def write(self, pos, symbol):
        cells = dict(self.cells)
        if symbol == BLANK and self.fill_one_below is None:
            cells.pop(pos, None)
        else:
            cells[pos] = symbol
        return Tape(cells, self.fill_one_below)

    @property
    def is_unbounded(self):
        return self.fill_one_below is not None

    def one_count(self):
        """Number of ``1`` cells; UNBOUNDED for a filled tape."""
        if self.is_unbounded:
            return UNBOUNDED
        return sum(1 for sym in self.cells.values() if sym == ONE)

    def written_nonblank_positions(self):
        return [pos for pos, sym in self.cells.items() if sym != BLANK]


@dataclass(frozen=True)
class MachineConfig:
    """Instantaneous machine state: tape contents, head position, head state."""

    tape: Tape
    head_pos: int
    state: str
    step_count: int = 0

    def symbol_under_head(self):
        return self.tape.read(self.head_pos)


class HaltReason(Enum):
    NO_RULE = "no_rule"
    STEP_BUDGET_EXHAUSTED = "step_budget_exhausted"


@dataclass(frozen=True)
class ExecutionTrace:
    """Every configuration of a run plus the rule applied at each of them.

    `halted` is True only when the machine stopped because no rule matched;
    a budget-limited run of a non-halting machine carries halted=False and
    STEP_BUDGET_EXHAUSTED.
    """

    configs: tuple[MachineConfig, ...]
    applied_rules: tuple[TransitionRule, ...]
    halted: bool
    halt_reason: HaltReason

    @property
    def final_config(self):
        return self.configs[-1]


def step(spec, config):
    """Apply the matching rule once; return the next configuration or None.

    None means no rule matches the current (state, symbol): the machine halts.
    Raises MalformedConfig when the configuration uses tokens the spec does
    not declare.
    """
    symbol = config.symbol_under_head()
    if config.state not in spec.states:
        raise MalformedConfig(f"state {config.state!r} not declared in spec")
    if symbol not in spec.alphabet:
        raise MalformedConfig(f"symbol {symbol!r} not declared in spec")
    rule = spec.rule_for(config.state, symbol)
    if rule is None:
        return None
    return _apply(rule, config)


def _apply(rule, config):
    return MachineConfig(
        tape=config.tape.write(config.head_pos, rule.sf),
        head_pos=config.head_pos + _MOVE_OFFSET[rule.move],
        state=rule.qf,
        step_count=config.step_count + 1,
    )


def run(spec, initial, max_steps):
    """Run until no rule matches or `max_steps` rules have been applied."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    configs = [initial]
    applied = []
    config = initial
    halted = False
    reason = HaltReason.STEP_BUDGET_EXHAUSTED
    for _ in range(max_steps):
        symbol = config.symbol_under_head()
        if config.state not in spec.states:
            raise MalformedConfig(f"state {config.state!r} not declared in spec")
        if symbol not in spec.alphabet:
            raise MalformedConfig(f"symbol {symbol!r} not declared in spec")
        rule = spec.rule_for(config.state, symbol)
        if rule is None:
            halted = True
            reason = HaltReason.NO_RULE
            break
        config = _apply(rule, config)
        configs.append(config)
        applied.append(rule)
    return ExecutionTrace(tuple(configs), tuple(applied), halted, reason)


OSCILLATING = "q1"
RESTING = "q0"

#: Consume one oscillation possibility: erase the 1 and keep going left.
CONSUME_RULE = TransitionRule(OSCILLATING, ONE, OSCILLATING, BLANK, LEFT)
#: Reading blank while oscillating: come to rest.
REST_RULE = TransitionRule(OSCILLATING, BLANK, RESTING, BLANK, STAY)


def oscillator_machine():
    """The two-state, two-rule machine realised by a damped oscillator."""
    return MachineSpec(
        states=frozenset({RESTING, OSCILLATING}),
        alphabet=frozenset({ONE, BLANK}),
        rules=(CONSUME_RULE, REST_RULE),
    )


def unary_tape(count):
    """Initial configuration holding `count` ones, head on the rightmost one.

    count=0 gives an all-blank tape (head on a blank cell); count=UNBOUNDED
    gives the lazily-filled endless tape.  The head state is the oscillating
    state in every case.
    """
    if count == UNBOUNDED:
        return MachineConfig(tape=Tape({}, fill_one_below=0), head_pos=0,
                             state=OSCILLATING)
    if count != int(count) or count < 0:
        raise ValueError(f"count must be a non-negative integer or UNBOUNDED (got {count!r})")
    count = int(count)
    cells = {pos: ONE for pos in range(count)}
    head = count - 1 if count > 0 else 0
    return MachineConfig(tape=Tape(cells), head_pos=head, state=OSCILLATING)


def render_trace(trace):
    """Fixed-width text rendering of a run, one line per configuration.

    Cells are joined with "|"; the head state token is inserted immediately
    before the cell under the head; the window spans the widest extent the
    run reached plus one context cell on each side; each non-final line ends
    with the rule applied from that configuration, e.g. ``<q1,1,q1,_,->``.
    """
    if not trace.configs:
        raise ValueError("empty trace")
    touched = set()
    for config in trace.configs:
        touched.add(config.head_pos)
        touched.update(config.tape.written_nonblank_positions())
    lo = min(touched) - 1
    hi = max(touched) + 1
    lines = []
    for i, config in enumerate(trace.configs):
        tokens = []
        for pos in range(lo, hi + 1):
            if pos == config.head_pos:
                tokens.append(config.state)
            tokens.append(config.tape.read(pos))
        line = "|".join(tokens)
        if i < len(trace.applied_rules):
            line += " " + trace.applied_rules[i].render()
        lines.append(line)
    return "\n".join(lines)
