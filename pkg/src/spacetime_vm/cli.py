"""Command line front end.

stvm run FILE       check and execute a program
stvm check FILE     report diagnostics only
stvm bench ...      run a solving strategy against the reference solver

Exit codes: 0 on a terminated run or an exhausted queue, 1 when
diagnostics (or a benchmark mismatch) are reported, 2 when the program
executed a stop.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import assets, lattice, problems, solver
from .analysis import analyze_source
from .diagnostics import DiagnosticError
from .runtime import PAUSED, STOPPED, TERMINATED, FifoQueue, Machine, StackLR

_CODE_NAMES = {TERMINATED: "terminated", PAUSED: "paused", STOPPED: "stopped"}


def _parse_input(text: str):
    name, _, raw = text.partition("=")
    if not _:
        raise argparse.ArgumentTypeError(
            f"inputs look like name=value, got {text!r}")
    raw = raw.strip()
    if raw in ("true", "false", "unknown"):
        return name, lattice.Es(raw)
    if raw.startswith("{"):
        items = [int(v) for v in raw[1:-1].split(",") if v]
        return name, lattice.FSet.of(items)
    return name, int(raw)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stvm", description="search-tree process machine")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="check and execute a program")
    run.add_argument("file", type=Path)
    run.add_argument("--queue", choices=("dfs", "bfs"), default="dfs")
    run.add_argument("--watch", action="append", default=[],
                     help="report this variable's value each instant")
    run.add_argument("--input", action="append", default=[], type=_parse_input,
                     metavar="NAME=VALUE", help="join a value into a "
                     "declaration with this name")
    run.add_argument("--max-instants", type=int, default=100_000)
    run.add_argument("--trace", action="store_true")
    run.add_argument("--json", action="store_true")

    check = sub.add_parser("check", help="report diagnostics only")
    check.add_argument("file", type=Path)

    bench = sub.add_parser("bench", help="compare against the reference solver")
    bench.add_argument("problem", help="queens, latin, golomb, or a file path")
    bench.add_argument("size", type=int)
    bench.add_argument("--strategy", choices=("all", "first", "minimize"),
                       default="all")
    bench.add_argument("--queue", choices=("dfs", "bfs"), default="dfs")
    bench.add_argument("--max-instants", type=int, default=1_000_000)
    bench.add_argument("--json", action="store_true")
    bench.add_argument("--plot", type=Path, metavar="DIR",
                       help="write figures and the trace next to the report")
    return parser


def _print_diagnostics(diags) -> None:
    for diag in diags:
        print(diag.render(), file=sys.stderr)


def _cmd_check(args) -> int:
    source = args.file.read_text()
    _, diags = analyze_source(source, str(args.file))
    _print_diagnostics(diags)
    errors = [d for d in diags if not d.code.startswith("W-")]
    if errors:
        return 1
    print(f"{args.file}: ok")
    return 0


def _render_value(value) -> str:
    return value.show() if value is not None else "-"


def _cmd_run(args) -> int:
    source = args.file.read_text()
    loaded, diags = analyze_source(source, str(args.file))
    errors = [d for d in diags if not d.code.startswith("W-")]
    if errors or loaded is None:
        _print_diagnostics(diags)
        return 1

    inputs = {}
    for name, value in args.input:
        info = loaded.slot_named(name)
        if info is None:
            print(f"error: the program declares no variable named {name!r}",
                  file=sys.stderr)
            return 1
        if isinstance(value, int):
            if info.type_tag == "LMax":
                value = lattice.LMax(value)
            elif info.type_tag == "LMin":
                value = lattice.LMin(value)
            else:
                print(f"error: {name} is a {info.type_tag} variable; "
                      "an integer does not fit", file=sys.stderr)
                return 1
        inputs[name] = value

    queue = FifoQueue() if args.queue == "bfs" else StackLR()
    machine = Machine(loaded, queue=queue, inputs=inputs, watch=args.watch,
                      max_instants=args.max_instants)
    stats = machine.execute()

    if args.json:
        payload = {
            "file": str(args.file),
            "completion": _CODE_NAMES.get(stats.completion, "suspended"),
            "exhausted": stats.exhausted,
            "instants": stats.instants,
            "solutions": stats.solutions,
            "failures": stats.failures,
            "pruned": stats.pruned,
            "pushed": stats.pushed,
            "queue_left": stats.queue_left,
            "max_depth": stats.max_depth,
            "best_objective": stats.best_objective,
            "watch": {name: _render_value(machine.value_of(name))
                      for name in args.watch},
        }
        if args.trace:
            payload["trace"] = [
                {"instant": rec.instant, "node": rec.node,
                 "parent": rec.parent, "depth": rec.depth,
                 "code": _CODE_NAMES.get(rec.code, "suspended"),
                 "children": rec.children, "pruned": rec.pruned,
                 "values": {k: _render_value(v) for k, v in rec.values.items()}}
                for rec in machine.trace
            ]
        print(json.dumps(payload, indent=2))
    else:
        if args.trace:
            for rec in machine.trace:
                values = " ".join(f"{k}={_render_value(v)}"
                                  for k, v in rec.values.items())
                parent = rec.parent if rec.parent is not None else "-"
                print(f"instant={rec.instant} node={rec.node} parent={parent} "
                      f"depth={rec.depth} code={_CODE_NAMES.get(rec.code)} "
                      f"children={rec.children} pruned={rec.pruned}"
                      + (f" {values}" if values else ""))
        summary = (f"completion={_CODE_NAMES.get(stats.completion)} "
                   f"instants={stats.instants} solutions={stats.solutions} "
                   f"failures={stats.failures} pruned={stats.pruned} "
                   f"pushed={stats.pushed} queue_left={stats.queue_left} "
                   f"max_depth={stats.max_depth} "
                   f"best={stats.best_objective if stats.best_objective is not None else '-'}")
        if stats.exhausted:
            summary += " exhausted=yes"
        print(summary)
        for name in args.watch:
            print(f"{name}={_render_value(machine.value_of(name))}")

    return 2 if stats.completion == STOPPED else 0


_STRATEGY_ASSET = {"all": "csp_search", "first": "csp_search_first",
                   "minimize": "minimize_bab"}


def _write_plots(directory: Path, label: str, machine) -> list[Path]:
    import csv

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory.mkdir(parents=True, exist_ok=True)
    written = []

    trace_path = directory / f"{label}_trace.csv"
    with trace_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["instant", "node", "parent", "depth", "code",
                         "children", "pruned"])
        for rec in machine.trace:
            writer.writerow([rec.instant, rec.node, rec.parent, rec.depth,
                             rec.code, rec.children, rec.pruned])
    written.append(trace_path)

    instants = [rec.instant for rec in machine.trace]
    solved = []
    failed = []
    n_solved = n_failed = 0
    for rec in machine.trace:
        value = rec.values.get("consistent")
        shown = value.show() if value is not None else ""
        n_solved += shown == "true"
        n_failed += shown == "false"
        solved.append(n_solved)
        failed.append(n_failed)
    fig, axis = plt.subplots(figsize=(7, 4))
    axis.plot(instants, solved, label="solutions")
    axis.plot(instants, failed, label="failures")
    axis.set_xlabel("instant")
    axis.set_ylabel("cumulative count")
    axis.set_title(f"{label}: search profile")
    axis.legend()
    profile_path = directory / f"{label}_profile.png"
    fig.savefig(profile_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(profile_path)

    depths: dict[int, int] = {}
    for rec in machine.trace:
        depths[rec.depth] = depths.get(rec.depth, 0) + 1
    fig, axis = plt.subplots(figsize=(7, 4))
    axis.bar(list(depths.keys()), list(depths.values()))
    axis.set_xlabel("depth")
    axis.set_ylabel("nodes")
    axis.set_title(f"{label}: nodes per depth")
    depth_path = directory / f"{label}_depth.png"
    fig.savefig(depth_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(depth_path)
    return written


def _cmd_bench(args) -> int:
    if args.problem in problems.BUILDERS:
        problem = problems.build(args.problem, args.size)
    else:
        path = Path(args.problem)
        if not path.exists():
            print(f"error: unknown problem {args.problem!r}", file=sys.stderr)
            return 1
        problem = problems.parse_problem(path.read_text(), path.stem)

    if args.strategy == "minimize" and problem.objective is None:
        print("error: this problem declares no objective to minimize",
              file=sys.stderr)
        return 1

    source = assets.asset_source(_STRATEGY_ASSET[args.strategy])
    watch = ["consistent", "obj"] if args.strategy == "minimize" else ["consistent"]

    started = time.perf_counter()
    machine = assets.run_source(source, inputs=problem.inputs(),
                                queue=args.queue, watch=watch,
                                max_instants=args.max_instants)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    stats = machine.stats

    ref = solver.reference_search(problem.vstore, problem.cstore,
                                  mode=args.strategy,
                                  objective=problem.objective)

    match = (stats.instants == ref.nodes
             and stats.solutions == ref.solutions
             and stats.failures == ref.failures
             and stats.best_objective == ref.best_objective)

    label = f"{problem.name}_{args.strategy}"
    if args.json:
        payload = {
            "problem": problem.name,
            "strategy": args.strategy,
            "queue": args.queue,
            "nodes": stats.instants,
            "solutions": stats.solutions,
            "failures": stats.failures,
            "pruned": stats.pruned,
            "best_objective": stats.best_objective,
            "ref_nodes": ref.nodes,
            "ref_solutions": ref.solutions,
            "ref_failures": ref.failures,
            "ref_best_objective": ref.best_objective,
            "match": match,
            "elapsed_ms": round(elapsed_ms, 3),
        }
        print(json.dumps(payload, indent=2))
    else:
        best = stats.best_objective if stats.best_objective is not None else "-"
        ref_best = ref.best_objective if ref.best_objective is not None else "-"
        print(f"problem={problem.name} strategy={args.strategy} "
              f"queue={args.queue} nodes={stats.instants} "
              f"solutions={stats.solutions} failures={stats.failures} "
              f"pruned={stats.pruned} best={best} "
              f"ref_nodes={ref.nodes} ref_solutions={ref.solutions} "
              f"ref_failures={ref.failures} ref_best={ref_best} "
              f"match={'yes' if match else 'NO'} "
              f"elapsed_ms={elapsed_ms:.1f}")

    if args.plot:
        for path in _write_plots(args.plot, label, machine):
            print(f"wrote {path}")

    return 0 if match else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "bench":
            return _cmd_bench(args)
    except DiagnosticError as err:
        _print_diagnostics(err.diagnostics)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
