"""Line-numbered countdown-loop language: parser, loop recogniser, interpreter.

Grammar, one statement per line::

    line : INT stmt
    stmt : VAR ':=' expr
         | 'if' VAR '>' INT 'goto' INT
         | '//' text
         | 'end'
    expr : INT | VAR | VAR '-' INT

Whitespace between tokens is ignored.  The canonical counted loop is

    10 t := 10
    20 t := t-1
    30 // body
    40 if t>1 goto 20
    50 end

recognize_loop() matches that shape structurally (any line numbers, any
counter name, any number of body lines that leave the counter alone) and
interpret() executes a program literally, line by line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_KEYWORDS = {"if", "goto", "end"}


class ParseError(Exception):
    """Syntax or structural error, located by source line and column."""

    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class DuplicateLineNumber(ParseError):
    pass


class DanglingGoto(ParseError):
    pass


class NotACountedLoop(Exception):
    """Program does not have the counted-loop shape."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class StepBudgetExhausted(Exception):
    pass


class EvalError(Exception):
    """Runtime error while interpreting (e.g. an unbound variable)."""


# --- syntax tree ------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Sub:
    var: str
    amount: int


@dataclass(frozen=True)
class Assign:
    var: str
    expr: object


@dataclass(frozen=True)
class IfGoto:
    var: str
    comparator: str
    literal: int
    target: int


@dataclass(frozen=True)
class Comment:
    text: str


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Line:
    number: int
    stmt: object


@dataclass(frozen=True)
class Program:
    lines: tuple[Line, ...]


# --- parsing ----------------------------------------------------------------

class _Cursor:
    """Single-line token scanner that reports 1-based columns."""

    def __init__(self, text, source_line):
        self.text = text
        self.pos = 0
        self.source_line = source_line

    def error(self, message, column=None):
        col = (self.pos if column is None else column) + 1
        raise ParseError(self.source_line, col, message)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)

    def match(self, literal):
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def take_int(self, what):
        self.skip_ws()
        m = re.match(r"\d+", self.text[self.pos:])
        if m is None:
            self.error(f"expected {what}")
        self.pos += m.end()
        return int(m.group())

    def peek_name(self):
        self.skip_ws()
        m = re.match(r"[A-Za-z][A-Za-z0-9_]*", self.text[self.pos:])
        return m.group() if m else None

    def take_name(self, what):
        name = self.peek_name()
        if name is None:
            self.error(f"expected {what}")
        self.pos += len(name)
        return name

    def rest(self):
        return self.text[self.pos:]


def _parse_expr(cur):
    cur.skip_ws()
    if re.match(r"\d", cur.text[cur.pos:cur.pos + 1] or ""):
        return Num(cur.take_int("integer"))
    name = cur.take_name("integer or variable")
    if name in _KEYWORDS:
        cur.error(f"{name!r} is a keyword, not a variable", cur.pos - len(name))
    if cur.match("-"):
        return Sub(name, cur.take_int("integer after '-'"))
    return Var(name)


def _parse_statement(cur):
    if cur.match("//"):
        return Comment(cur.rest())
    name = cur.peek_name()
    if name is None:
        cur.error("expected a statement")
    if name == "end":
        cur.take_name("end")
        if not cur.at_end():
            cur.error("unexpected text after 'end'")
        return End()
    if name == "if":
        cur.take_name("if")
        var = cur.take_name("variable")
        if var in _KEYWORDS:
            cur.error(f"{var!r} is a keyword, not a variable", cur.pos - len(var))
        if not cur.match(">"):
            cur.error("expected '>'")
        literal = cur.take_int("integer")
        kw = cur.take_name("'goto'")
        if kw != "goto":
            cur.error("expected 'goto'", cur.pos - len(kw))
        target = cur.take_int("target line number")
        if not cur.at_end():
            cur.error("unexpected text after goto target")
        return IfGoto(var, ">", literal, target)
    if name == "goto":
        cur.error("'goto' is only valid after an 'if' condition")
    var = cur.take_name("variable")
    if not cur.match(":="):
        cur.error("expected ':='")
    expr = _parse_expr(cur)
    if not cur.at_end():
        cur.error("unexpected text after expression")
    return Assign(var, expr)


def parse(source):
    """Parse source text into a Program.

    Raises ParseError (with line/column), DuplicateLineNumber or DanglingGoto.
    Line numbers must be strictly increasing and 'end', if present, must be
    the unique last statement.
    """
    lines = []
    source_lines = []
    seen = set()
    for source_line, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip():
            continue
        cur = _Cursor(raw, source_line)
        cur.skip_ws()
        start_col = cur.pos
        if not re.match(r"\d", raw[cur.pos:cur.pos + 1] or ""):
            cur.error("expected a line number", start_col)
        number = cur.take_int("line number")
        if number <= 0:
            cur.error("line number must be positive", start_col)
        if number in seen:
            raise DuplicateLineNumber(source_line, start_col + 1,
                                      f"duplicate line number {number}")
        if lines and number < lines[-1].number:
            cur.error(f"line number {number} not increasing", start_col)
        seen.add(number)
        stmt = _parse_statement(cur)
        lines.append(Line(number, stmt))
        source_lines.append(source_line)
    if not lines:
        raise ParseError(1, 1, "empty program")
    for i, line in enumerate(lines):
        if isinstance(line.stmt, End) and i != len(lines) - 1:
            raise ParseError(source_lines[i], 1,
                             f"'end' at line {line.number} must be last")
    numbers = {line.number for line in lines}
    for i, line in enumerate(lines):
        if isinstance(line.stmt, IfGoto) and line.stmt.target not in numbers:
            raise DanglingGoto(source_lines[i], 1,
                               f"goto target {line.stmt.target} does not exist")
    return Program(tuple(lines))


def render_expr(expr):
    if isinstance(expr, Num):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    return f"{expr.var}-{expr.amount}"


def render_statement(stmt):
    if isinstance(stmt, Assign):
        return f"{stmt.var} := {render_expr(stmt.expr)}"
    if isinstance(stmt, IfGoto):
        return f"if {stmt.var}>{stmt.literal} goto {stmt.target}"
    if isinstance(stmt, Comment):
        return f"//{stmt.text}"
    return "end"


def render_program(program):
    """Pretty-print a Program; parse(render_program(p)) == p."""
    return "\n".join(f"{line.number} {render_statement(line.stmt)}"
                     for line in program.lines) + "\n"


# --- counted-loop recognition -------------------------------------------------

@dataclass(frozen=True)
class LoopPattern:
    """A recognised counted loop: counter name, trip count, body line numbers."""

    counter: str
    count: int
    body_lines: tuple[int, ...]

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")


def _mentions(expr, var):
    if isinstance(expr, Var):
        return expr.name == var
    if isinstance(expr, Sub):
        return expr.var == var
    return False


def recognize_loop(program, overrides=None):
    """Match the counted-loop shape and return its LoopPattern.

    Shape (structural; line numbers and counter name are free):
        1. counter := <int>          (or := <var> resolved via overrides)
        2. counter := counter-1
        3+ body lines: comments or assignments that leave the counter alone
        n-1. if counter><1> goto <line 2>
        n.  end

    Raises NotACountedLoop naming the first deviating line.
    """
    lines = program.lines
    if len(lines) < 4:
        last = lines[-1].number if lines else 0
        raise NotACountedLoop(last, "too short for a counted loop")

    init = lines[0]
    if not isinstance(init.stmt, Assign):
        raise NotACountedLoop(init.number, "expected counter initialisation")
    counter = init.stmt.var
    expr = init.stmt.expr
    if isinstance(expr, Num):
        count = expr.value
    elif isinstance(expr, Var) and overrides and expr.name in overrides:
        count = overrides[expr.name]
    else:
        raise NotACountedLoop(init.number,
                              "counter must be initialised from an integer "
                              "(or a variable bound by overrides)")
    if count < 1:
        raise NotACountedLoop(init.number, f"loop count must be >= 1 (got {count})")

    dec = lines[1]
    if not (isinstance(dec.stmt, Assign) and dec.stmt.var == counter
            and dec.stmt.expr == Sub(counter, 1)):
        raise NotACountedLoop(dec.number, f"expected '{counter} := {counter}-1'")

    guard = lines[-2]
    if not isinstance(guard.stmt, IfGoto):
        raise NotACountedLoop(guard.number, "expected the loop guard")
    if guard.stmt.var != counter or guard.stmt.literal != 1:
        raise NotACountedLoop(guard.number, f"guard must test '{counter}>1'")
    if guard.stmt.target != dec.number:
        raise NotACountedLoop(guard.number,
                              f"guard must jump to the decrement line {dec.number}")

    if not isinstance(lines[-1].stmt, End):
        raise NotACountedLoop(lines[-1].number, "expected 'end'")

    body = []
    for line in lines[2:-2]:
        stmt = line.stmt
        if isinstance(stmt, Comment):
            body.append(line.number)
            continue
        if isinstance(stmt, Assign) and stmt.var != counter \
                and not _mentions(stmt.expr, counter):
            body.append(line.number)
            continue
        raise NotACountedLoop(line.number, "body may not touch the counter")

    return LoopPattern(counter, count, tuple(body))


# --- interpretation -----------------------------------------------------------

@dataclass
class InterpreterResult:
    """Literal execution outcome.

    body_executions counts passes through the loop body region when the
    program has the counted-loop shape, and is None otherwise.  Note the
    shape checks its guard after the body, so the body runs at least once
    even for a trip count of 1.
    """

    body_executions: int | None
    final_env: dict
    line_visits: dict = field(default_factory=dict)


_A_NUM, _A_VAR, _A_SUB, _IF, _NOP, _END = range(6)


def _eval(env, kind, payload, line_no):
    if kind == _A_NUM:
        return payload
    name = payload if kind == _A_VAR else payload[0]
    if name not in env:
        raise EvalError(f"line {line_no}: variable {name!r} is unbound")
    value = env[name]
    return value if kind == _A_VAR else value - payload[1]


def interpret(program, overrides=None, max_steps=20_000_000):
    """Execute a program literally, line by line.

    overrides seed the variable environment (and supply a value for a
    symbolic loop bound).  Raises StepBudgetExhausted after max_steps line
    executions and EvalError on unbound variable reads.
    """
    index_of = {line.number: i for i, line in enumerate(program.lines)}
    code = []
    for line in program.lines:
        stmt = line.stmt
        if isinstance(stmt, Assign):
            if isinstance(stmt.expr, Num):
                code.append((_A_NUM, stmt.var, stmt.expr.value, line.number))
            elif isinstance(stmt.expr, Var):
                code.append((_A_VAR, stmt.var, stmt.expr.name, line.number))
            else:
                code.append((_A_SUB, stmt.var, (stmt.expr.var, stmt.expr.amount),
                             line.number))
        elif isinstance(stmt, IfGoto):
            code.append((_IF, stmt.var, (stmt.literal, index_of[stmt.target]),
                         line.number))
        elif isinstance(stmt, Comment):
            code.append((_NOP, None, None, line.number))
        else:
            code.append((_END, None, None, line.number))

    env = dict(overrides or {})
    visits = {line.number: 0 for line in program.lines}
    pc = 0
    steps = 0
    n = len(code)
    while pc < n:
        steps += 1
        if steps > max_steps:
            raise StepBudgetExhausted(f"no termination within {max_steps} steps")
        kind, var, payload, line_no = code[pc]
        visits[line_no] += 1
        if kind == _END:
            break
        if kind == _IF:
            literal, target = payload
            if var not in env:
                raise EvalError(f"line {line_no}: variable {var!r} is unbound")
            if env[var] > literal:
                pc = target
                continue
        elif kind != _NOP:
            env[var] = _eval(env, kind, payload, line_no)
        pc += 1

    body_executions = None
    try:
        recognize_loop(program, overrides)
    except NotACountedLoop:
        pass
    else:
        # every pass through the loop region visits the decrement line once
        body_executions = visits[program.lines[1].number]
    return InterpreterResult(body_executions, env, visits)
