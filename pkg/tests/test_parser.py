"""Grammar coverage, spans, and error recovery."""

import pytest

from spacetime_vm import assets, ast
from spacetime_vm.diagnostics import DiagnosticError
from spacetime_vm.parser import parse


def test_every_construct_parses():
    src = """
    // comment up front
    proc main =
      LMax a single_space = 0;
      LMin b world_line = bot;
      ES c single_time = unknown;
      FSet d world_line = {1, 2, 3};
      a <- 4;                       // arrow sugar
      probe(read a, write b, readwrite a);
      par
        loop pause end
      ||
        par
          when a |= 2 then nothing else stop end
        <>
          space prune end
        end
      end;
      run helper(a, c)

    proc helper(x, flag) =
      when flag |= true then x <- 9 end
    """
    program = parse(src)
    assert [p.name for p in program.procs] == ["main", "helper"]


def test_spans_point_at_the_offending_token():
    with pytest.raises(DiagnosticError) as err:
        parse("proc main =\n  x <- ; pause")
    (diag,) = err.value.diagnostics
    assert diag.code == "E-PARSE"
    assert (diag.line, diag.col) == (2, 8)


def test_parser_reports_several_errors_in_one_pass():
    src = "proc main = x <- 1;; pause\nproc q = loop pause"
    with pytest.raises(DiagnosticError) as err:
        parse(src)
    codes = [d.code for d in err.value.diagnostics]
    assert len(codes) >= 2
    assert set(codes) == {"E-PARSE"}


def test_keywords_are_not_identifiers():
    with pytest.raises(DiagnosticError):
        parse("proc main = loop <- 1")
    with pytest.raises(DiagnosticError):
        parse("proc pause = nothing")


def test_lexer_rejects_stray_characters():
    with pytest.raises(DiagnosticError) as err:
        parse("proc main = x <- 1 $")
    assert "unexpected character" in err.value.diagnostics[0].message


def test_missing_end_is_reported():
    with pytest.raises(DiagnosticError) as err:
        parse("proc main = space pause")
    assert "expected 'end'" in err.value.diagnostics[0].message


def test_par_operators_do_not_mix_in_one_block():
    # the two compositions have different branch algebra, so relative
    # precedence is refused rather than guessed
    src = "proc main = par pause || pause <> pause end"
    with pytest.raises(DiagnosticError) as err:
        parse(src)
    assert "mix" in err.value.diagnostics[0].message


def test_else_branch_is_optional():
    program = parse("proc main = when a |= 1 then pause end")
    when = program.procs[0].body
    assert isinstance(when.else_body, ast.Nothing)


@pytest.mark.parametrize("name", assets.ASSETS)
def test_bundled_programs_round_trip_through_the_printer(name):
    program = parse(assets.asset_source(name))
    text = ast.pretty_program(program)
    again = parse(text)
    assert ast.pretty_program(again) == text


def test_declaration_requires_an_initializer():
    with pytest.raises(DiagnosticError):
        parse("proc main = LMax x world_line; pause")


def test_literal_forms():
    src = """
    proc main =
      LMax a world_line = bot;
      ES b world_line = false;
      FSet c world_line = {};
      a <- 12
    """
    program = parse(src)
    assert program.procs[0].name == "main"
