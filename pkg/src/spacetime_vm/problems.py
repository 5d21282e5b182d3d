"""Benchmark problems as initial variable and constraint stores.

Each builder returns the stores to inject into a solving program plus the
id of the objective variable when the problem is an optimization.  The
text format gives the command line a way to load custom instances:

    var 0 1..4        domain as an inclusive range
    var 1 {1,3,7}     domain as a set
    ne 0 1 0          x0 != x1 + 0
    lt 0 1            x0 < x1
    le 0 3            x0 <= 3
    gt 0 0            x0 > 0
    eqdiff 2 1 0      x2 = x1 - x0
    objective 3       minimize x3
"""

from __future__ import annotations

from dataclasses import dataclass

from .solver import (CStoreValue, EqDiff, GtConst, LeConst, LtVar, NeOffset,
                     Propagator, SolverError, VStoreValue)


@dataclass
class Problem:
    name: str
    vstore: VStoreValue
    cstore: CStoreValue
    objective: int | None = None

    def inputs(self) -> dict:
        out = {"domains": self.vstore, "constraints": self.cstore}
        if self.objective is not None:
            from . import lattice

            out["objvar"] = lattice.LMax(self.objective)
        return out


def queens(n: int) -> Problem:
    """Place n queens on an n by n board, one variable per column."""
    domains = {i: frozenset(range(1, n + 1)) for i in range(n)}
    constraints: list[Propagator] = []
    for i in range(n):
        for j in range(i + 1, n):
            constraints.append(NeOffset(i, j, 0))
            constraints.append(NeOffset(i, j, i - j))
            constraints.append(NeOffset(i, j, j - i))
    return Problem(f"queens-{n}", VStoreValue(domains), CStoreValue(constraints))


def latin(n: int) -> Problem:
    """Latin square of order n: rows and columns hold distinct symbols."""
    domains = {r * n + c: frozenset(range(1, n + 1))
               for r in range(n) for c in range(n)}
    constraints: list[Propagator] = []
    for r in range(n):
        for c1 in range(n):
            for c2 in range(c1 + 1, n):
                constraints.append(NeOffset(r * n + c1, r * n + c2, 0))
    for c in range(n):
        for r1 in range(n):
            for r2 in range(r1 + 1, n):
                constraints.append(NeOffset(r1 * n + c, r2 * n + c, 0))
    return Problem(f"latin-{n}", VStoreValue(domains), CStoreValue(constraints))


def golomb(marks: int) -> Problem:
    """Shortest ruler with `marks` marks whose pairwise distances differ.

    Variables 0..marks-1 are the marks; the remaining variables hold the
    pairwise differences.  The objective is the last mark.
    """
    # A ruler with marks at 2^i - 1 has all-distinct differences, so
    # 2^(marks-1) always bounds the optimum; from 7 marks up the
    # quadratic bound is the tighter of the two.
    upper = min(2 ** (marks - 1), marks * marks)
    domains: dict[int, frozenset] = {}
    domains[0] = frozenset({0})
    for i in range(1, marks):
        domains[i] = frozenset(range(0, upper + 1))
    constraints: list[Propagator] = []
    for i in range(marks - 1):
        constraints.append(LtVar(i, i + 1))

    diff_ids: list[int] = []
    next_id = marks
    for i in range(marks):
        for j in range(i + 1, marks):
            domains[next_id] = frozenset(range(1, upper + 1))
            constraints.append(EqDiff(next_id, j, i))
            diff_ids.append(next_id)
            next_id += 1
    for a in range(len(diff_ids)):
        for b in range(a + 1, len(diff_ids)):
            constraints.append(NeOffset(diff_ids[a], diff_ids[b], 0))
    # The mirror of a ruler is a ruler: force the first distance below the
    # last to keep one representative of each pair.
    constraints.append(LtVar(diff_ids[0], diff_ids[-1]))
    return Problem(f"golomb-{marks}", VStoreValue(domains),
                   CStoreValue(constraints), objective=marks - 1)


BUILDERS = {"queens": queens, "latin": latin, "golomb": golomb}


def build(name: str, size: int) -> Problem:
    if name not in BUILDERS:
        raise KeyError(f"unknown problem {name!r}; "
                       f"choose from {', '.join(sorted(BUILDERS))}")
    return BUILDERS[name](size)


def parse_problem(text: str, name: str = "problem") -> Problem:
    """Load a problem from the line-oriented text format."""
    domains: dict[int, frozenset] = {}
    constraints: list[Propagator] = []
    objective = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//")[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "var":
                var = int(parts[1])
                spec = "".join(parts[2:])  # set literals may contain spaces
                if spec.startswith("{"):
                    if not spec.endswith("}"):
                        raise ValueError(f"unclosed set literal {spec!r}")
                    values = frozenset(int(v) for v in spec[1:-1].split(",") if v)
                else:
                    lo, hi = spec.split("..")
                    values = frozenset(range(int(lo), int(hi) + 1))
                domains[var] = values
            elif kind == "ne":
                constraints.append(NeOffset(int(parts[1]), int(parts[2]),
                                            int(parts[3])))
            elif kind == "lt":
                constraints.append(LtVar(int(parts[1]), int(parts[2])))
            elif kind == "le":
                constraints.append(LeConst(int(parts[1]), int(parts[2])))
            elif kind == "gt":
                constraints.append(GtConst(int(parts[1]), int(parts[2])))
            elif kind == "eqdiff":
                constraints.append(EqDiff(int(parts[1]), int(parts[2]),
                                          int(parts[3])))
            elif kind == "objective":
                objective = int(parts[1])
            else:
                raise ValueError(f"unknown directive {kind!r}")
        except (IndexError, ValueError) as err:
            raise SolverError(f"{name}:{lineno}: bad problem line: {err}")
    return Problem(name, VStoreValue(domains), CStoreValue(constraints),
                   objective)
