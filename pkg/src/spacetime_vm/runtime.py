"""The search-tree machine: one logical instant per tree node.

Each instant pops a node, restores its world-line values, runs every
process until the whole program is terminated, paused or stopped, then
evaluates the `space` bodies collected along the way to build the child
nodes and pushes them on the queue.  The queueing strategy (stack or
fifo) is the only thing deciding the exploration order, so strategies
written as processes compose with any traversal.

Scheduling inside an instant is driven by access counters.  Before the
instant runs, an upper bound on the writes, readwrites and reads that can
still happen is computed for every variable; a read may only fire once
the writers are drained, a readwrite once the plain writes are drained.
When progress stalls because a guard cannot commit, the bounds are
re-derived from the current residual program, discounting branches whose
guard can no longer go the other way.  Statically checked programs never
deadlock here.

Variable declarations substitute a fresh location into their scope when
they execute, so a declaration inside a loop body names a new cell on
every iteration, and the value a paused process saw stays with the old
cell.  The queue snapshots world-line cells only: single-space cells are
the global memory of the search, and single-time cells reset to bottom
between instants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import ast, branches, builtins as host, lattice
from .analysis import Loaded

TERMINATED, PAUSED, STOPPED, SUSPENDED = 0, 1, 2, 3

_LOOP_BUDGET = 1_000_000


class VmError(Exception):
    pass


class Loc:
    """A runtime cell address; identity matters, the name is for messages."""

    __slots__ = ("index", "name")
    _counter = itertools.count()

    def __init__(self, name: str):
        self.index = next(Loc._counter)
        self.name = name

    def __repr__(self):
        return f"{self.name}@{self.index}"


class VarCell:
    __slots__ = ("type_tag", "spacetime", "value", "pending_w", "pending_rw",
                 "pending_r")

    def __init__(self, type_tag: str, spacetime: str, value: lattice.Value):
        self.type_tag = type_tag
        self.spacetime = spacetime
        self.value = value
        self.pending_w = 0
        self.pending_rw = 0
        self.pending_r = 0

    def settled(self) -> bool:
        return self.pending_w == 0 and self.pending_rw == 0

    def fork(self) -> "VarCell":
        return VarCell(self.type_tag, self.spacetime, self.value)


@dataclass
class Node:
    uid: int
    parent: int | None
    depth: int
    snapshot: dict


class StackLR:
    """Depth-first, leftmost child explored first."""

    def __init__(self):
        self.items: list[Node] = []

    def push(self, nodes):
        self.items.extend(reversed(nodes))

    def pop(self) -> Node:
        return self.items.pop()

    def __len__(self):
        return len(self.items)


class FifoQueue:
    """Breadth-first, instants sweep the tree level by level."""

    def __init__(self):
        self.items: list[Node] = []

    def push(self, nodes):
        self.items.extend(nodes)

    def pop(self) -> Node:
        return self.items.pop(0)

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class InstantRecord:
    instant: int
    node: int
    parent: int | None
    depth: int
    code: int
    children: int
    pruned: int
    values: dict


@dataclass
class RunStats:
    instants: int = 0
    solutions: int = 0
    failures: int = 0
    internal: int = 0
    pruned: int = 0
    pushed: int = 0
    max_depth: int = 0
    best_objective: int | None = None
    completion: int = PAUSED
    exhausted: bool = False
    queue_left: int = 0


class _RtPar(ast.Stmt):
    """A parallel statement mid-flight, accumulating its branch output."""

    __slots__ = ("is_and", "left", "right", "acc_left", "acc_right",
                 "code_left", "code_right", "span")

    def __init__(self, is_and: bool, left: ast.Stmt, right: ast.Stmt,
                 span: ast.Span):
        self.is_and = is_and
        self.left = left
        self.right = right
        self.acc_left: tuple = ()
        self.acc_right: tuple = ()
        self.code_left = SUSPENDED
        self.code_right = SUSPENDED
        self.span = span


def _concat_payload(a: tuple, b: tuple) -> tuple:
    return a + b


def substitute_slot(stmt: ast.Stmt, slot: int, loc: Loc) -> ast.Stmt:
    """Replace every reference to `slot` by a concrete location.

    Slots are unique per declaration site, so no shadowing rules are
    needed; the substitution simply covers the whole scope.
    """
    def sub_operand(op):
        if isinstance(op, ast.VarRef) and op.slot == slot:
            return ast.LocRef(loc, op.span)
        return op

    def walk(node):
        if isinstance(node, ast.Seq):
            return ast.Seq(walk(node.first), walk(node.second), node.span)
        if isinstance(node, ast.HostCall):
            args = tuple(ast.Arg(sub_operand(a.ref), a.access) for a in node.args)
            return ast.HostCall(node.fn, args, node.span)
        if isinstance(node, ast.When):
            return ast.When(sub_operand(node.left), sub_operand(node.right),
                            walk(node.then_body), walk(node.else_body), node.span)
        if isinstance(node, ast.Loop):
            return ast.Loop(walk(node.body), node.span)
        if isinstance(node, ast.Space):
            return ast.Space(walk(node.body), node.span)
        if isinstance(node, ast.ParOr):
            return ast.ParOr(walk(node.left), walk(node.right), node.span)
        if isinstance(node, ast.ParAnd):
            return ast.ParAnd(walk(node.left), walk(node.right), node.span)
        if isinstance(node, _RtPar):
            out = _RtPar(node.is_and, walk(node.left), walk(node.right), node.span)
            out.acc_left, out.acc_right = node.acc_left, node.acc_right
            out.code_left, out.code_right = node.code_left, node.code_right
            return out
        return node

    return walk(stmt)


class Machine:
    """Executes one checked program against a queue of search-tree nodes."""

    def __init__(self, loaded: Loaded, queue=None, inputs=None, watch=(),
                 max_instants: int = 1_000_000):
        self.loaded = loaded
        self.queue = queue if queue is not None else StackLR()
        self.inputs = dict(inputs or {})
        self.watch_names = tuple(watch)
        self.max_instants = max_instants

        self.residual: ast.Stmt = loaded.stmt
        self.cells: dict[Loc, VarCell] = {}
        self.pending_slots: dict[int, list[int]] = {}
        self.watch_locs: dict[str, Loc] = {}
        self.trace: list[InstantRecord] = []
        self.stats = RunStats()
        self._uid = itertools.count()
        self._instant_branches: tuple = ()
        self._loop_budget = _LOOP_BUDGET
        # per counting pass: what each guard's own branches pledged, keyed
        # by the guard's object identity
        self._guard_pledges: dict[int, dict] = {}

    # -- declarations -----------------------------------------------------

    def _declare(self, decl: ast.VarDecl) -> Loc:
        info = self.loaded.slots[decl.slot]
        loc = Loc(info.name)
        value = decl.init.value
        if value is None:
            value = lattice.bottom_of(info.type_tag)
        if info.name in self.inputs:
            value = value.join(self.inputs.pop(info.name))
        cell = VarCell(info.type_tag, info.spacetime, value)
        counts = self.pending_slots.pop(decl.slot, None)
        if counts is not None:
            cell.pending_w, cell.pending_rw, cell.pending_r = counts
        self.cells[loc] = cell
        if info.name not in self.watch_locs:
            self.watch_locs[info.name] = loc
        return loc

    # -- access counting ---------------------------------------------------

    def _count_key(self, ref):
        if isinstance(ref, ast.LocRef):
            return ref.location
        if isinstance(ref, ast.VarRef):
            return ("slot", ref.slot)
        return None

    def _can(self, stmt, counts) -> bool:
        """Add `stmt`'s possible accesses this instant; True if it can finish."""
        if isinstance(stmt, (ast.Nothing, ast.Prune, ast.Space, ast.VarDecl)):
            return True
        if isinstance(stmt, (ast.Pause, ast.Stop)):
            return False
        if isinstance(stmt, ast.HostCall):
            for arg in stmt.args:
                key = self._count_key(arg.ref)
                if key is not None:
                    slot_counts = counts.setdefault(key, [0, 0, 0])
                    slot_counts[(ast.WRITE, ast.READWRITE, ast.READ)
                                .index(arg.access)] += 1
            return True
        if isinstance(stmt, ast.When):
            return self._can_branches(stmt, counts, self._can)
        if isinstance(stmt, ast.Seq):
            if isinstance(stmt.first, ast.VarDecl):
                done = self._can(stmt.second, counts)
                return done
            if self._can(stmt.first, counts):
                return self._can(stmt.second, counts)
            return False
        if isinstance(stmt, ast.Loop):
            self._can(stmt.body, counts)
            return False
        if isinstance(stmt, (ast.ParOr, ast.ParAnd)):
            left = self._can(stmt.left, counts)
            right = self._can(stmt.right, counts)
            return left and right
        if isinstance(stmt, _RtPar):
            left = self._can(stmt.left, counts)
            right = self._can(stmt.right, counts)
            return left and right
        raise AssertionError(f"no counting rule for {type(stmt).__name__}")

    def _can_branches(self, when: ast.When, counts, recurse) -> bool:
        then_counts: dict = {}
        else_counts: dict = {}
        then_done = recurse(when.then_body, then_counts)
        else_done = recurse(when.else_body, else_counts)
        pledge: dict = {}
        for key in set(then_counts) | set(else_counts):
            merged = [max(a, b) for a, b in
                      zip(then_counts.get(key, [0, 0, 0]),
                          else_counts.get(key, [0, 0, 0]))]
            pledge[key] = merged
            slot_counts = counts.setdefault(key, [0, 0, 0])
            for i in range(3):
                slot_counts[i] += merged[i]
        self._record_guard_pledge(when, pledge)
        return then_done or else_done

    def _record_guard_pledge(self, when: ast.When, counts: dict) -> None:
        own = self._guard_pledges.setdefault(id(when), {})
        for key, (w, rw, r) in counts.items():
            prev = own.get(key, (0, 0, 0))
            own[key] = (prev[0] + w, prev[1] + rw, prev[2] + r)

    def _guard_settled(self, when: ast.When, op) -> bool:
        """Settledness as a guard sees it.

        A guard's own branches only run once the guard commits, so their
        pledged writes can never be what decides it; counting them would
        deadlock any program whose guard variable is written under the
        guard itself.  Everyone else's pledges still block.
        """
        if not isinstance(op, ast.LocRef):
            return True
        cell = self.cells[op.location]
        own = self._guard_pledges.get(id(when))
        if own is None:
            return cell.settled()
        w, rw, _ = own.get(op.location, (0, 0, 0))
        return cell.pending_w <= w and cell.pending_rw <= rw

    def _refined(self, stmt, counts) -> bool:
        """Like _can, but drops branches whose guard is already decided."""
        if isinstance(stmt, ast.When) and isinstance(stmt.left, ast.LocRef):
            verdict = self._verdict(stmt)
            then_possible = (verdict == lattice.Entailment.TRUE
                             or not self._guard_settled(stmt, stmt.left))
            else_possible = (verdict != lattice.Entailment.TRUE
                             or not self._guard_settled(stmt, stmt.right))
            picks = []
            if then_possible:
                picks.append(stmt.then_body)
            if else_possible:
                picks.append(stmt.else_body)
            if len(picks) == 2:
                return self._can_branches(stmt, counts, self._refined)
            taken: dict = {}
            done = self._refined(picks[0], taken)
            self._record_guard_pledge(stmt, taken)
            for key, vals in taken.items():
                slot_counts = counts.setdefault(key, [0, 0, 0])
                for i in range(3):
                    slot_counts[i] += vals[i]
            return done
        if isinstance(stmt, ast.Seq):
            if isinstance(stmt.first, ast.VarDecl):
                return self._refined(stmt.second, counts)
            if self._refined(stmt.first, counts):
                return self._refined(stmt.second, counts)
            return False
        if isinstance(stmt, ast.Loop):
            self._refined(stmt.body, counts)
            return False
        if isinstance(stmt, (ast.ParOr, ast.ParAnd, _RtPar)):
            left = self._refined(stmt.left, counts)
            right = self._refined(stmt.right, counts)
            return left and right
        return self._can(stmt, counts)

    def _apply_counts(self, counts) -> None:
        for cell in self.cells.values():
            cell.pending_w = cell.pending_rw = cell.pending_r = 0
        self.pending_slots.clear()
        for key, (w, rw, r) in counts.items():
            if isinstance(key, tuple) and key[0] == "slot":
                self.pending_slots[key[1]] = [w, rw, r]
            else:
                cell = self.cells[key]
                cell.pending_w, cell.pending_rw, cell.pending_r = w, rw, r

    def _counts_snapshot(self):
        snap = {loc: (c.pending_w, c.pending_rw, c.pending_r)
                for loc, c in self.cells.items()}
        snap["pending"] = {k: tuple(v) for k, v in self.pending_slots.items()}
        return snap

    # -- guard evaluation ---------------------------------------------------

    def _operand_value(self, op) -> lattice.Value:
        if isinstance(op, ast.LocRef):
            return self.cells[op.location].value
        if isinstance(op, ast.Literal):
            return op.value
        raise VmError(f"reference to a variable before its declaration: {op}")

    def _operand_settled(self, op) -> bool:
        if isinstance(op, ast.LocRef):
            return self.cells[op.location].settled()
        return True

    def _verdict(self, when: ast.When) -> lattice.Entailment:
        return lattice.entails(self._operand_value(when.left),
                               self._operand_value(when.right))

    # -- one scheduling pass --------------------------------------------------

    def _step(self, stmt):
        """Advance `stmt` as far as the counters allow in one sweep.

        Returns (residual, completion code, branch sequence, progressed).
        """
        if isinstance(stmt, ast.Nothing):
            return stmt, TERMINATED, (), False
        if isinstance(stmt, ast.Pause):
            return stmt, PAUSED, (), False
        if isinstance(stmt, ast.Stop):
            return stmt, STOPPED, (), False
        if isinstance(stmt, ast.Prune):
            return ast.Nothing(), TERMINATED, (branches.PRUNED,), True
        if isinstance(stmt, ast.VarDecl):
            self._declare(stmt)
            return ast.Nothing(), TERMINATED, (), True
        if isinstance(stmt, ast.Space):
            return ast.Nothing(), TERMINATED, (branches.SpaceBranch((stmt.body,)),), True
        if isinstance(stmt, ast.HostCall):
            return self._step_call(stmt)
        if isinstance(stmt, ast.When):
            return self._step_when(stmt)
        if isinstance(stmt, ast.Seq):
            return self._step_seq(stmt)
        if isinstance(stmt, ast.Loop):
            self._loop_budget -= 1
            if self._loop_budget <= 0:
                raise VmError("loop makes no progress across instants")
            return self._step(ast.Seq(stmt.body, stmt, stmt.span))
        if isinstance(stmt, (ast.ParOr, ast.ParAnd)):
            live = _RtPar(isinstance(stmt, ast.ParAnd), stmt.left, stmt.right,
                          stmt.span)
            return self._step_par(live)
        if isinstance(stmt, _RtPar):
            return self._step_par(stmt)
        raise AssertionError(f"no step rule for {type(stmt).__name__}")

    def _step_seq(self, stmt: ast.Seq):
        if isinstance(stmt.first, ast.VarDecl):
            decl = stmt.first
            loc = self._declare(decl)
            scoped = substitute_slot(stmt.second, decl.slot, loc)
            rest, code, out, _ = self._step(scoped)
            return rest, code, out, True
        first, code, out, progressed = self._step(stmt.first)
        if code == TERMINATED:
            second, code2, out2, prog2 = self._step(stmt.second)
            return second, code2, branches.seq_concat(out, out2), progressed or prog2
        return ast.Seq(first, stmt.second, stmt.span), code, out, progressed

    def _step_call(self, call: ast.HostCall):
        for arg in call.args:
            if isinstance(arg.ref, ast.LocRef):
                cell = self.cells[arg.ref.location]
                if arg.access == ast.READ and not cell.settled():
                    return call, SUSPENDED, (), False
                if arg.access == ast.READWRITE and cell.pending_w > 0:
                    return call, SUSPENDED, (), False
            elif isinstance(arg.ref, ast.VarRef):
                raise VmError(
                    f"{call.fn} refers to {arg.ref.name} before its declaration")
        spec = host.lookup(call.fn)
        values = {}
        for idx, arg in enumerate(call.args):
            if arg.access in (ast.READ, ast.READWRITE):
                values[idx] = self._operand_value(arg.ref)
        contributions = spec.impl(values) if spec.impl else {}
        for idx, contribution in contributions.items():
            target = call.args[idx].ref
            cell = self.cells[target.location]
            cell.value = cell.value.join(contribution)
        for arg in call.args:
            if isinstance(arg.ref, ast.LocRef):
                cell = self.cells[arg.ref.location]
                if arg.access == ast.WRITE:
                    cell.pending_w = max(0, cell.pending_w - 1)
                elif arg.access == ast.READWRITE:
                    cell.pending_rw = max(0, cell.pending_rw - 1)
                else:
                    cell.pending_r = max(0, cell.pending_r - 1)
        return ast.Nothing(), TERMINATED, (), True

    def _step_when(self, when: ast.When):
        verdict = self._verdict(when)
        if verdict == lattice.Entailment.TRUE:
            # The right side could still grow and overturn the verdict.
            if not self._guard_settled(when, when.right):
                return when, SUSPENDED, (), False
            rest, code, out, _ = self._step(when.then_body)
            return rest, code, out, True
        # Unknown entailment commits to the else branch once the left side
        # can no longer grow into the right.
        if not self._guard_settled(when, when.left):
            return when, SUSPENDED, (), False
        rest, code, out, _ = self._step(when.else_body)
        return rest, code, out, True

    def _step_par(self, par: _RtPar):
        left, code_l, out_l, prog_l = self._step(par.left)
        right, code_r, out_r, prog_r = self._step(par.right)
        par.left, par.right = left, right
        par.code_left, par.code_right = code_l, code_r
        par.acc_left = branches.seq_concat(par.acc_left, out_l)
        par.acc_right = branches.seq_concat(par.acc_right, out_r)
        code = max(code_l, code_r)
        progressed = prog_l or prog_r
        if code == TERMINATED:
            merge = branches.par_and if par.is_and else branches.par_or
            out = merge(par.acc_left, par.acc_right, _concat_payload)
            return ast.Nothing(), TERMINATED, out, True
        return par, code, (), progressed

    # -- instant boundaries ---------------------------------------------------

    def _collect_branches(self, stmt) -> tuple:
        if isinstance(stmt, _RtPar):
            left = branches.seq_concat(stmt.acc_left, self._collect_branches(stmt.left))
            right = branches.seq_concat(stmt.acc_right, self._collect_branches(stmt.right))
            merge = branches.par_and if stmt.is_and else branches.par_or
            return merge(left, right, _concat_payload)
        if isinstance(stmt, ast.Seq):
            return self._collect_branches(stmt.first)
        return ()

    def _normalize(self, stmt):
        """Rewrite the active spine for the next instant."""
        if isinstance(stmt, ast.Pause):
            return ast.Nothing()
        if isinstance(stmt, ast.Seq):
            return ast.Seq(self._normalize(stmt.first), stmt.second, stmt.span)
        if isinstance(stmt, _RtPar):
            if stmt.is_and and TERMINATED in (stmt.code_left, stmt.code_right):
                return ast.Nothing()
            stmt.left = self._normalize(stmt.left)
            stmt.right = self._normalize(stmt.right)
            stmt.acc_left = stmt.acc_right = ()
            stmt.code_left = stmt.code_right = SUSPENDED
            return stmt
        return stmt

    def _run_to_settle(self, stmt):
        """Step until the completion code settles; the scheduler core."""
        collected: tuple = ()
        stalled = False
        while True:
            stmt, code, out, progressed = self._step(stmt)
            collected = branches.seq_concat(collected, out)
            if code in (TERMINATED, PAUSED, STOPPED):
                return stmt, code, collected
            if progressed:
                stalled = False
                continue
            if stalled:
                raise VmError("the instant cannot make progress; "
                              "scheduling is stuck")
            before = self._counts_snapshot()
            self._guard_pledges.clear()
            counts: dict = {}
            self._refined(stmt, counts)
            self._apply_counts(counts)
            # a no-change refine still refreshes the guard pledges, so give
            # the stepper one more look before declaring the instant stuck
            stalled = self._counts_snapshot() == before

    def _restore_node(self, node: Node) -> None:
        for loc, cell in self.cells.items():
            if cell.spacetime == ast.WORLD_LINE:
                if loc in node.snapshot:
                    cell.value = node.snapshot[loc]
                else:
                    cell.value = lattice.bottom_of(cell.type_tag)
            elif cell.spacetime == ast.SINGLE_TIME:
                cell.value = lattice.bottom_of(cell.type_tag)

    def _reachable_locs(self, stmt, acc: set) -> None:
        """Collect every location the residual could still touch."""
        if isinstance(stmt, ast.HostCall):
            for arg in stmt.args:
                if isinstance(arg.ref, ast.LocRef):
                    acc.add(arg.ref.location)
        elif isinstance(stmt, ast.When):
            if isinstance(stmt.left, ast.LocRef):
                acc.add(stmt.left.location)
            if isinstance(stmt.right, ast.LocRef):
                acc.add(stmt.right.location)
            self._reachable_locs(stmt.then_body, acc)
            self._reachable_locs(stmt.else_body, acc)
        elif isinstance(stmt, ast.Seq):
            self._reachable_locs(stmt.first, acc)
            self._reachable_locs(stmt.second, acc)
        elif isinstance(stmt, (ast.Loop, ast.Space)):
            self._reachable_locs(stmt.body, acc)
        elif isinstance(stmt, (ast.ParOr, ast.ParAnd, _RtPar)):
            self._reachable_locs(stmt.left, acc)
            self._reachable_locs(stmt.right, acc)

    def _sweep_dead_cells(self) -> None:
        """Drop cells nothing can reach any more.

        Loop bodies redeclare their locals every iteration, so each instant
        strands the previous incarnation's cells.  A cell is dead once the
        residual holds no reference to it and it is not the pinned
        incarnation of a watched name: nodes carry data snapshots, never
        code, so no future instant can mint a reference to an old location.
        Snapshot entries for swept cells are simply never read again.
        """
        live = set(self.watch_locs.values())
        self._reachable_locs(self.residual, live)
        if len(live) < len(self.cells):
            self.cells = {loc: cell for loc, cell in self.cells.items()
                          if loc in live}

    def _evaluate_body(self, payload: tuple) -> dict:
        """Run space bodies on a copy of the final store; return the child."""
        main_cells = self.cells
        body_cells = {}
        for loc, cell in main_cells.items():
            body_cells[loc] = cell.fork() if cell.spacetime == ast.WORLD_LINE else cell
        for cell in body_cells.values():
            cell.pending_w = cell.pending_rw = cell.pending_r = 0

        chain: ast.Stmt = ast.Nothing()
        for body in payload:
            chain = ast.Seq(chain, body) if not isinstance(chain, ast.Nothing) else body

        self.cells = body_cells
        saved_pending = self.pending_slots
        self.pending_slots = {}
        try:
            self._guard_pledges.clear()
            counts: dict = {}
            self._can(chain, counts)
            self._apply_counts(counts)
            residual, code, out = self._run_to_settle(chain)
            if code != TERMINATED or any(b is not branches.PRUNED for b in out):
                raise VmError("a space body must terminate instantly "
                              "without branching")
            snapshot = {loc: cell.value for loc, cell in self.cells.items()
                        if cell.spacetime == ast.WORLD_LINE}
        finally:
            self.cells = main_cells
            self.pending_slots = saved_pending
        return snapshot

    def execute_instant(self, node: Node) -> tuple[int, list[Node]]:
        self.stats.instants += 1
        self.stats.max_depth = max(self.stats.max_depth, node.depth)
        self._loop_budget = _LOOP_BUDGET

        self._guard_pledges.clear()
        counts: dict = {}
        self._can(self.residual, counts)
        self._apply_counts(counts)

        self.residual, code, collected = self._run_to_settle(self.residual)
        collected = branches.seq_concat(collected,
                                        self._collect_branches(self.residual))
        self.residual = self._normalize(self.residual)

        for cell in self.cells.values():
            cell.pending_w = cell.pending_rw = cell.pending_r = 0

        pruned_here = 0
        children: list[Node] = []
        for branch in collected:
            if branch is branches.PRUNED:
                pruned_here += 1
                continue
            snapshot = self._evaluate_body(branch.payload)
            children.append(Node(next(self._uid), node.uid, node.depth + 1,
                                 snapshot))
        self.stats.pruned += pruned_here
        self.stats.pushed += len(children)

        self._classify(node, code, len(children), pruned_here)
        self._sweep_dead_cells()
        return code, children

    def _classify(self, node: Node, code: int, kept: int, pruned: int) -> None:
        values = {}
        for name in self.watch_names:
            loc = self.watch_locs.get(name)
            if loc is not None:
                values[name] = self.cells[loc].value
        consistent_loc = self.watch_locs.get("consistent")
        if consistent_loc is not None:
            verdict = self.cells[consistent_loc].value
            if isinstance(verdict, lattice.Es):
                if verdict.value == "true":
                    self.stats.solutions += 1
                elif verdict.value == "false":
                    self.stats.failures += 1
                else:
                    self.stats.internal += 1
        obj_loc = self.watch_locs.get("obj")
        if obj_loc is not None:
            best = self.cells[obj_loc].value
            if isinstance(best, lattice.LMin) and not best.is_bottom():
                self.stats.best_objective = int(best.value)
        self.trace.append(InstantRecord(self.stats.instants, node.uid,
                                        node.parent, node.depth, code,
                                        kept, pruned, values))

    def execute(self) -> RunStats:
        self.queue.push([Node(next(self._uid), None, 0, {})])
        code = PAUSED
        while code == PAUSED and len(self.queue):
            if self.stats.instants >= self.max_instants:
                self.stats.exhausted = True
                break
            node = self.queue.pop()
            self._restore_node(node)
            code, children = self.execute_instant(node)
            self.queue.push(children)
        self.stats.completion = code
        self.stats.queue_left = len(self.queue)
        return self.stats

    # -- inspection helpers ----------------------------------------------------

    def value_of(self, name: str) -> lattice.Value | None:
        loc = self.watch_locs.get(name)
        return self.cells[loc].value if loc is not None else None
