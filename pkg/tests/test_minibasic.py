import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import listing_source
from loopspring.minibasic import (Assign, Comment, DanglingGoto,
                                  DuplicateLineNumber, End, EvalError, IfGoto,
                                  NotACountedLoop, Num, ParseError,
                                  StepBudgetExhausted, Sub, Var, interpret,
                                  parse, recognize_loop, render_program)


# --- parsing -----------------------------------------------------------------

def test_parse_canonical_listing(make_listing):
    program = parse(make_listing(10))
    assert [line.number for line in program.lines] == [10, 20, 30, 40, 50]
    stmts = [line.stmt for line in program.lines]
    assert stmts[0] == Assign("t", Num(10))
    assert stmts[1] == Assign("t", Sub("t", 1))
    assert stmts[2] == Comment(" loop body")
    assert stmts[3] == IfGoto("t", ">", 1, 20)
    assert stmts[4] == End()


def test_parse_single_end():
    program = parse("10 end")
    assert program.lines == (parse("10 end").lines[0],)
    assert isinstance(program.lines[0].stmt, End)


def test_parse_is_whitespace_insensitive():
    tight = parse("10 t:=5\n20 t:=t-1\n30 if t>1 goto 20\n40 end")
    loose = parse("10   t :=  5\n20 t := t - 1\n30 if  t > 1  goto  20\n40 end")
    assert tight == loose


def test_parse_symbolic_bound():
    program = parse("10 t := M\n20 end")
    assert program.lines[0].stmt == Assign("t", Var("M"))


def test_parse_comment_preserves_text():
    program = parse("10 //Fai quello che ti serve\n20 end")
    assert program.lines[0].stmt == Comment("Fai quello che ti serve")
    assert parse("10 //\n20 end").lines[0].stmt == Comment("")


def test_dangling_goto():
    with pytest.raises(DanglingGoto):
        parse("10 t := t-1\n20 if t>1 goto 99")


def test_duplicate_line_number():
    with pytest.raises(DuplicateLineNumber):
        parse("10 t := 1\n10 t := 2")


def test_line_numbers_must_increase():
    with pytest.raises(ParseError, match="not increasing"):
        parse("20 t := 1\n10 end")


def test_end_must_be_last():
    with pytest.raises(ParseError, match="must be last"):
        parse("10 end\n20 t := 1")


def test_empty_source():
    with pytest.raises(ParseError, match="empty"):
        parse("   \n  \n")


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse("10 t := 5\n20 t = 4")
    assert err.value.line == 2
    assert err.value.column == 6


def test_keyword_cannot_be_a_variable():
    with pytest.raises(ParseError, match="keyword"):
        parse("10 t := goto")


def test_unknown_statement():
    with pytest.raises(ParseError):
        parse("10 print t")


@pytest.mark.parametrize("source", [
    "10 if t>1 goto\n",
    "10 if t goto 20\n",
    "10 t := \n",
    "ten t := 5\n",
    "10 t := 5 extra\n",
])
def test_malformed_lines(source):
    with pytest.raises(ParseError):
        parse(source)


def test_render_parse_round_trip(make_listing):
    program = parse(make_listing(10))
    assert parse(render_program(program)) == program


@given(count=st.integers(min_value=1, max_value=5000),
       counter=st.sampled_from(["t", "n", "steps_left"]),
       comments=st.integers(min_value=0, max_value=3))
@settings(max_examples=50, deadline=None)
def test_round_trip_over_generated_loops(count, counter, comments):
    source = listing_source(count, counter=counter,
                            body=tuple(f"// c{i}" for i in range(comments)))
    program = parse(source)
    assert parse(render_program(program)) == program


# --- loop recognition -----------------------------------------------------------

def test_recognize_canonical_listing(make_listing):
    pattern = recognize_loop(parse(make_listing(10)))
    assert pattern.counter == "t"
    assert pattern.count == 10
    assert pattern.body_lines == (30,)


def test_recognize_rejects_trivial_program():
    with pytest.raises(NotACountedLoop):
        recognize_loop(parse("10 end"))


def test_recognize_two_body_comments(make_listing):
    source = make_listing(10, body=("// a", "// b"))
    pattern = recognize_loop(parse(source))
    assert pattern.count == 10
    assert len(pattern.body_lines) == 2


def test_recognize_ignores_concrete_line_numbers():
    renumbered = recognize_loop(parse(
        "7 n := 4\n13 n := n-1\n21 // x\n99 if n>1 goto 13\n105 end"))
    canonical = recognize_loop(parse(
        "10 n := 4\n20 n := n-1\n30 // x\n40 if n>1 goto 20\n50 end"))
    assert (renumbered.counter, renumbered.count) == (canonical.counter, canonical.count)
    assert len(renumbered.body_lines) == len(canonical.body_lines)
    assert renumbered.body_lines == (21,)


def test_recognize_body_assignment_to_other_variable(make_listing):
    source = make_listing(5, body=("x := 3", "// note"))
    pattern = recognize_loop(parse(source))
    assert len(pattern.body_lines) == 2


def test_recognize_rejects_body_touching_counter(make_listing):
    source = make_listing(5, body=("t := 3",))
    with pytest.raises(NotACountedLoop, match="body"):
        recognize_loop(parse(source))
    source = make_listing(5, body=("x := t-1",))
    with pytest.raises(NotACountedLoop, match="body"):
        recognize_loop(parse(source))


def test_recognize_rejects_wrong_guard(make_listing):
    source = make_listing(5).replace("if t>1", "if t>2")
    with pytest.raises(NotACountedLoop, match="guard"):
        recognize_loop(parse(source))


def test_recognize_rejects_wrong_decrement(make_listing):
    source = make_listing(5).replace("t := t-1", "t := t-2")
    with pytest.raises(NotACountedLoop):
        recognize_loop(parse(source))


def test_recognize_rejects_zero_count(make_listing):
    with pytest.raises(NotACountedLoop, match=">= 1"):
        recognize_loop(parse(make_listing(0)))


def test_recognize_symbolic_bound_with_overrides():
    source = "10 t := M\n20 t := t-1\n30 //\n40 if t>1 goto 20\n50 end"
    pattern = recognize_loop(parse(source), overrides={"M": 7})
    assert pattern.count == 7
    with pytest.raises(NotACountedLoop):
        recognize_loop(parse(source))


# --- interpretation ----------------------------------------------------------------

def test_interpret_listing_m10(make_listing):
    result = interpret(parse(make_listing(10)))
    assert result.body_executions == 9  # t runs 9..1; guard stops at t=1
    assert result.final_env["t"] == 1


def test_interpret_listing_m2(make_listing):
    assert interpret(parse(make_listing(2))).body_executions == 1


def test_interpret_listing_m1(make_listing):
    # the guard runs after the body, so even a bound of 1 executes it once
    result = interpret(parse(make_listing(1)))
    assert result.body_executions == 1
    assert result.final_env["t"] == 0


def test_interpret_counts_body_region_passes(make_listing):
    result = interpret(parse(make_listing(10)))
    assert result.line_visits[20] == result.line_visits[30] == 9
    assert result.line_visits[40] == 9
    assert result.line_visits[10] == result.line_visits[50] == 1


def test_interpret_symbolic_bound_via_overrides():
    source = "10 t := M\n20 t := t-1\n30 //\n40 if t>1 goto 20\n50 end"
    result = interpret(parse(source), overrides={"M": 5})
    assert result.body_executions == 4
    assert result.final_env["t"] == 1


def test_interpret_unbound_variable():
    with pytest.raises(EvalError, match="unbound"):
        interpret(parse("10 t := M\n20 end"))


def test_interpret_non_loop_program_has_no_body_count():
    result = interpret(parse("10 x := 2\n20 y := x\n30 end"))
    assert result.body_executions is None
    assert result.final_env == {"x": 2, "y": 2}


def test_interpret_goto_false_falls_through():
    result = interpret(parse("10 t := 1\n20 if t>1 goto 40\n30 t := 99\n40 end"))
    assert result.final_env["t"] == 99


def test_interpret_step_budget():
    source = "10 t := 2\n20 t := 2\n30 if t>1 goto 20\n40 end"
    with pytest.raises(StepBudgetExhausted):
        interpret(parse(source), max_steps=1000)


def test_interpret_terminates_for_large_bounds(make_listing):
    result = interpret(parse(make_listing(10**6)))
    assert result.body_executions == 10**6 - 1
