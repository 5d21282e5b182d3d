"""Problem builders and the line-oriented problem format.

Solution counts come from exhaustive enumeration of the same stores,
plus the published censuses everyone knows: 2/10/4 ways to place 4/5/6
queens, 12 latin squares of order 3, optimal rulers 6/11/17.
"""

import pytest

from spacetime_vm import problems, solver


@pytest.mark.parametrize("n,count", [(4, 2), (5, 10), (6, 4)])
def test_queens_solution_census(n, count):
    p = problems.queens(n)
    assert len(solver.brute_force_solutions(p.vstore, p.cstore)) == count
    assert p.objective is None


@pytest.mark.parametrize("n,count", [(2, 2), (3, 12)])
def test_latin_square_census(n, count):
    p = problems.latin(n)
    assert len(p.vstore.domains) == n * n
    assert len(solver.brute_force_solutions(p.vstore, p.cstore)) == count


@pytest.mark.parametrize("marks,best", [(4, 6), (5, 11), (6, 17)])
def test_golomb_ruler_optima(marks, best):
    p = problems.golomb(marks)
    assert p.objective is not None
    ref = solver.reference_search(p.vstore, p.cstore, mode="minimize",
                                  objective=p.objective)
    assert ref.best_objective == best


def test_golomb_solutions_have_distinct_differences():
    p = problems.golomb(4)
    # narrow first: enumeration over the raw domains is needlessly huge,
    # and narrowing is already known to preserve every solution
    narrowed = solver.VStoreValue(
        solver.propagate_fixpoint(p.vstore.domains, p.cstore.propagators))
    sols = solver.brute_force_solutions(narrowed, p.cstore, limit=5)
    assert sols
    for sol in sols:
        marks = [sol[i] for i in range(4)]
        assert marks[0] == 0
        assert marks == sorted(marks)
        diffs = [b - a for i, a in enumerate(marks)
                 for b in marks[i + 1:]]
        assert len(diffs) == len(set(diffs))


def test_inputs_expose_the_store_names():
    p = problems.queens(4)
    assert set(p.inputs()) == {"domains", "constraints"}
    g = problems.golomb(4)
    assert set(g.inputs()) == {"domains", "constraints", "objvar"}


def test_build_by_name():
    assert problems.build("queens", 5).name == "queens-5"
    with pytest.raises(KeyError):
        problems.build("sudoku", 9)


def test_problem_text_format():
    text = """
    // two distinct values, first below second
    var 0 1..3
    var 1 {1, 2, 3}
    ne 0 1 0
    lt 0 1
    objective 0
    """
    p = problems.parse_problem(text, "toy")
    assert p.vstore.domains == {0: frozenset({1, 2, 3}),
                                1: frozenset({1, 2, 3})}
    assert set(p.cstore.propagators) == {solver.NeOffset(0, 1, 0),
                                         solver.LtVar(0, 1)}
    assert p.objective == 0
    sols = solver.brute_force_solutions(p.vstore, p.cstore)
    assert {(s[0], s[1]) for s in sols} == {(1, 2), (1, 3), (2, 3)}


@pytest.mark.parametrize("bad", [
    "var 0",                # missing domain
    "var 0 1..",            # half a range
    "var 0 {1, 2",          # unclosed set
    "ne 0 1",               # missing offset
    "maximize 0",           # unknown directive
])
def test_problem_text_errors_carry_line_numbers(bad):
    with pytest.raises(solver.SolverError) as err:
        problems.parse_problem(bad, "bad")
    assert "bad:1" in str(err.value)
