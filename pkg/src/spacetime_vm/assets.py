"""Bundled strategy programs and drivers that iterate them.

Strategies live as plain source files next to this module; they compose by
running their mains in parallel, so `compose_par` renames each asset's
processes apart and synthesizes a main that runs them side by side.
Restarting drivers (iterative deepening, discrepancy sweeps) rebuild a
fresh machine per iteration with the limit passed as an input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from . import ast, lattice
from .analysis import Loaded, load_program
from .parser import parse
from .runtime import FifoQueue, Machine, RunStats, StackLR

_ASSET_DIR = Path(__file__).parent / "stdlib"

ASSETS = ("binary_tree", "node_count", "depth_count", "bounded_depth",
          "bounded_discrepancy", "bd_and_bdis", "csp_search",
          "csp_search_first", "minimize_bab")


def asset_source(name: str) -> str:
    if name not in ASSETS:
        raise KeyError(f"no bundled program named {name!r}")
    return (_ASSET_DIR / f"{name}.st").read_text()


def asset(name: str, **params: int) -> str:
    """Asset source with single_space initializers patched to `params`."""
    src = asset_source(name)
    for key, value in params.items():
        pattern = rf"((?:LMax|LMin) {re.escape(key)} single_space = )bot;"
        patched, hits = re.subn(pattern, rf"\g<1>{value};", src)
        if hits == 0:
            raise KeyError(f"{name} has no tunable variable {key!r}")
        src = patched
    return src


def _rename_runs(stmt: ast.Stmt, mapping: dict[str, str]) -> ast.Stmt:
    if isinstance(stmt, ast.Run):
        return ast.Run(mapping[stmt.proc], stmt.args, stmt.span)
    if isinstance(stmt, ast.Seq):
        return ast.Seq(_rename_runs(stmt.first, mapping),
                       _rename_runs(stmt.second, mapping), stmt.span)
    if isinstance(stmt, ast.When):
        return ast.When(stmt.left, stmt.right,
                        _rename_runs(stmt.then_body, mapping),
                        _rename_runs(stmt.else_body, mapping), stmt.span)
    if isinstance(stmt, ast.Loop):
        return ast.Loop(_rename_runs(stmt.body, mapping), stmt.span)
    if isinstance(stmt, ast.Space):
        return ast.Space(_rename_runs(stmt.body, mapping), stmt.span)
    if isinstance(stmt, ast.ParOr):
        return ast.ParOr(_rename_runs(stmt.left, mapping),
                         _rename_runs(stmt.right, mapping), stmt.span)
    if isinstance(stmt, ast.ParAnd):
        return ast.ParAnd(_rename_runs(stmt.left, mapping),
                          _rename_runs(stmt.right, mapping), stmt.span)
    return stmt


def compose_par(sources: list[str], op: str = "<>") -> str:
    """Compose programs by running their mains in parallel.

    `op` is "<>" (a pruned branch prunes for everyone) or "||" (a branch
    survives unless every process prunes it).
    """
    if op not in ("<>", "||"):
        raise ValueError("composition operator must be '<>' or '||'")
    procs: list[ast.ProcDef] = []
    entry_calls = []
    for index, src in enumerate(sources):
        program = parse(src, f"<asset {index}>")
        mapping = {p.name: f"s{index}_{p.name}" for p in program.procs}
        for proc in program.procs:
            procs.append(ast.ProcDef(mapping[proc.name], proc.params,
                                     _rename_runs(proc.body, mapping)))
        entry_calls.append(f"run s{index}_main()")
    body = f"\npar\n  " + f"\n{op}\n  ".join(entry_calls) + "\nend"
    rendered = [ast.pretty_program(ast.Program(tuple(procs)))]
    rendered.append(f"proc main ={body}\n")
    return "\n".join(rendered)


def _coerce_input(loaded: Loaded, name: str, value) -> lattice.Value:
    if isinstance(value, lattice.Value):
        return value
    info = loaded.slot_named(name)
    if info is None:
        raise KeyError(f"the program declares no variable named {name!r}")
    if info.type_tag == "LMax":
        return lattice.LMax(value)
    if info.type_tag == "LMin":
        return lattice.LMin(value)
    if info.type_tag == "ES":
        return lattice.Es(value)
    raise TypeError(f"cannot coerce {value!r} for a {info.type_tag} variable; "
                    "pass a lattice value")


def run_source(src: str, inputs: dict | None = None, queue: str = "dfs",
               watch=(), max_instants: int = 1_000_000) -> Machine:
    """Check and execute a program; returns the finished machine."""
    loaded = load_program(src)
    coerced = {name: _coerce_input(loaded, name, value)
               for name, value in (inputs or {}).items()}
    queue_obj = FifoQueue() if queue == "bfs" else StackLR()
    machine = Machine(loaded, queue=queue_obj, inputs=coerced, watch=watch,
                      max_instants=max_instants)
    machine.execute()
    return machine


@dataclass
class IterationReport:
    limit: int
    stats: RunStats
    leaves: int
    complete: bool


def iterative_deepening(tree: str = "binary_tree", max_limit: int = 8,
                        queue: str = "dfs",
                        inputs: dict | None = None) -> list[IterationReport]:
    """Restart a depth-bounded search with growing limits.

    Stops early once an iteration never reaches its depth limit, since a
    deeper restart cannot visit anything new.
    """
    reports = []
    for limit in range(max_limit):
        src = compose_par([asset_source(tree), asset_source("bounded_depth")])
        run_inputs = dict(inputs or {})
        run_inputs["depth_limit"] = limit
        machine = run_source(src, inputs=run_inputs, queue=queue)
        leaves = sum(1 for rec in machine.trace if rec.depth == limit)
        complete = machine.stats.max_depth < limit
        reports.append(IterationReport(limit, machine.stats, leaves, complete))
        if complete:
            break
    return reports


def discrepancy_sweep(tree: str = "binary_tree", depth_limit: int = 3,
                      max_discrepancy: int = 3, queue: str = "dfs",
                      inputs: dict | None = None) -> list[IterationReport]:
    """Restart a depth-bounded search with a growing discrepancy budget."""
    reports = []
    previous_leaves = None
    for limit in range(max_discrepancy + 1):
        src = compose_par([asset_source(tree), asset_source("bounded_depth"),
                           asset_source("bounded_discrepancy")])
        run_inputs = dict(inputs or {})
        run_inputs["depth_limit"] = depth_limit
        run_inputs["dis_limit"] = limit
        machine = run_source(src, inputs=run_inputs, queue=queue)
        leaves = sum(1 for rec in machine.trace if rec.depth == depth_limit)
        complete = previous_leaves is not None and leaves == previous_leaves
        reports.append(IterationReport(limit, machine.stats, leaves, complete))
        previous_leaves = leaves
    return reports
