"""Static checks that make instants deterministic and schedulable.

The pipeline is: parse, inline process calls, resolve names to slots,
then check three things.

* Loops must not have an instantaneous path: every static path through a
  loop body crosses a `pause` or `stop`.
* `space` bodies run at the end of an instant to build a child node, so
  they must be instantaneous, must not branch or prune themselves, and
  may only write world-line variables.
* Causality: within one instant every variable's accesses must be
  orderable as writes, then at most one readwrite, then reads - across
  all concurrent processes, for every way the `when` guards can resolve.
  A guard itself depends on the final value of one side: the side that
  could still flip its verdict.  Programs whose accesses cannot be
  ordered are rejected with the offending cycle.

Causality works on symbolic per-instant paths.  Loops are unrolled at
most once per instant (one body prefix plus one re-entry prefix), and the
set of reachable instant configurations is explored to a fixed bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from . import ast, builtins as host, lattice
from .diagnostics import Diagnostic, DiagnosticError
from .parser import parse

MAX_CONFIGS = 64
MAX_OUTCOMES = 512


@dataclass(frozen=True)
class SlotInfo:
    index: int
    name: str
    type_tag: str
    spacetime: str
    span: ast.Span


@dataclass
class Loaded:
    """A parsed, inlined, resolved and checked program."""

    program: ast.Program
    stmt: ast.Stmt
    slots: list[SlotInfo]
    file: str

    def slot_named(self, name: str) -> SlotInfo | None:
        # Outermost declaration wins; shadowing inner decls come later.
        for info in self.slots:
            if info.name == name:
                return info
        return None


# ---------------------------------------------------------------------------
# Name resolution and typing


def _resolve_literal(lit: ast.Literal, type_tag: str, file: str,
                     diags: list[Diagnostic]) -> ast.Literal:
    text = lit.text
    span = lit.span

    def fail(msg: str) -> ast.Literal:
        diags.append(Diagnostic("E-TYPE", msg, span.line, span.col, file))
        return replace(lit, value=lattice.bottom_of(type_tag))

    if text == "bot":
        return replace(lit, value=lattice.bottom_of(type_tag))
    if text in ("true", "false", "unknown"):
        if type_tag != "ES":
            return fail(f"{text!r} is an ES literal, not {type_tag}")
        return replace(lit, value=lattice.Es(text))
    if text.startswith("{"):
        if type_tag != "FSet":
            return fail(f"a set literal cannot initialize {type_tag}")
        inner = text[1:-1]
        items = [int(part) for part in inner.split(",") if part]
        return replace(lit, value=lattice.FSet.of(items))
    # signed integer
    try:
        number = int(text)
    except ValueError:
        return fail(f"bad literal {text!r}")
    if type_tag == "LMax":
        return replace(lit, value=lattice.LMax(number))
    if type_tag == "LMin":
        return replace(lit, value=lattice.LMin(number))
    return fail(f"an integer literal cannot initialize {type_tag}")


class _Resolver:
    def __init__(self, file: str):
        self.file = file
        self.slots: list[SlotInfo] = []
        self.diags: list[Diagnostic] = []

    def error(self, code: str, msg: str, span: ast.Span) -> None:
        self.diags.append(Diagnostic(code, msg, span.line, span.col, self.file))

    def new_slot(self, decl: ast.VarDecl) -> int:
        index = len(self.slots)
        self.slots.append(SlotInfo(index, decl.name, decl.type_tag,
                                   decl.spacetime, decl.span))
        return index

    def slot_type(self, slot: int) -> str:
        return self.slots[slot].type_tag

    def ref(self, op: ast.VarRef, env: dict[str, int]) -> ast.VarRef:
        if op.name in env:
            return replace(op, slot=env[op.name])
        self.error("E-UNBOUND", f"no variable named {op.name!r} in scope", op.span)
        return op

    def operand(self, op: ast.Operand, env: dict[str, int],
                type_hint: str | None) -> ast.Operand:
        if isinstance(op, ast.VarRef):
            resolved = self.ref(op, env)
            if resolved.slot is not None and type_hint is not None:
                actual = self.slot_type(resolved.slot)
                if actual != type_hint:
                    self.error("E-TYPE",
                               f"{op.name} has type {actual}, expected {type_hint}",
                               op.span)
            return resolved
        if isinstance(op, ast.Literal):
            if type_hint is None:
                self.error("E-TYPE",
                           "cannot infer the lattice type of this literal", op.span)
                return op
            return _resolve_literal(op, type_hint, self.file, self.diags)
        return op

    def host_call(self, call: ast.HostCall, env: dict[str, int]) -> ast.HostCall:
        spec = host.lookup(call.fn)
        if spec is None:
            self.error("E-FUNC", f"unknown function {call.fn!r}", call.span)
            # still resolve references so later checks have slots
            args = tuple(ast.Arg(self.operand(a.ref, env, None) if isinstance(a.ref, ast.VarRef) else a.ref,
                                 a.access) for a in call.args)
            return ast.HostCall(call.fn, args, call.span)

        if spec.params is None:  # variadic probe-style function
            for pos, arg in enumerate(call.args):
                if arg.access != ast.READ:
                    self.error("E-SIG",
                               f"{call.fn} only observes; argument {pos} "
                               "cannot be written", call.span)
            args = tuple(ast.Arg(self.operand(a.ref, env, None) if isinstance(a.ref, ast.VarRef) else a.ref,
                                 a.access) for a in call.args)
            return ast.HostCall(call.fn, args, call.span)

        if len(call.args) != len(spec.params):
            self.error("E-SIG",
                       f"{call.fn} takes {len(spec.params)} arguments, got {len(call.args)}",
                       call.span)
            return call

        # The type of polymorphic parameters is pinned by their group peers.
        group_types: dict[int, str] = {}
        for group in spec.same_type_groups:
            for position in group:
                arg = call.args[position]
                if isinstance(arg.ref, ast.VarRef) and arg.ref.name in env:
                    slot = env[arg.ref.name]
                    group_types[id(group)] = self.slot_type(slot)
                    break

        args = []
        for position, (arg, param) in enumerate(zip(call.args, spec.params)):
            hint = param.type_tag
            if hint is None:
                for group in spec.same_type_groups:
                    if position in group and id(group) in group_types:
                        hint = group_types[id(group)]
            ref = self.operand(arg.ref, env, hint)
            if arg.access != param.access:
                self.error("E-SIG",
                           f"{call.fn} needs {param.access} access to argument "
                           f"{position + 1}, found {arg.access}",
                           call.span)
            if param.access in (ast.WRITE, ast.READWRITE) and isinstance(ref, ast.Literal):
                self.error("E-SIG",
                           f"{call.fn} writes argument {position + 1}; "
                           "a literal cannot be written", call.span)
            args.append(ast.Arg(ref, arg.access))
        return ast.HostCall(call.fn, tuple(args), call.span)

    def walk(self, stmt: ast.Stmt, env: dict[str, int]) -> ast.Stmt:
        if isinstance(stmt, ast.Seq):
            first = self.walk(stmt.first, env)
            inner = env
            if isinstance(first, ast.VarDecl) and first.slot is not None:
                inner = dict(env)
                inner[first.name] = first.slot
            return ast.Seq(first, self.walk(stmt.second, inner), stmt.span)
        if isinstance(stmt, ast.VarDecl):
            slot = self.new_slot(stmt)
            init = _resolve_literal(stmt.init, stmt.type_tag, self.file, self.diags)
            return replace(stmt, init=init, slot=slot)
        if isinstance(stmt, ast.HostCall):
            return self.host_call(stmt, env)
        if isinstance(stmt, ast.When):
            left = self.ref(stmt.left, env) if isinstance(stmt.left, ast.VarRef) else stmt.left
            left_type = None
            if isinstance(left, ast.VarRef) and left.slot is not None:
                left_type = self.slot_type(left.slot)
            right = self.operand(stmt.right, env, left_type)
            return ast.When(left, right,
                            self.walk(stmt.then_body, env),
                            self.walk(stmt.else_body, env), stmt.span)
        if isinstance(stmt, ast.Loop):
            return ast.Loop(self.walk(stmt.body, env), stmt.span)
        if isinstance(stmt, ast.Space):
            return ast.Space(self.walk(stmt.body, env), stmt.span)
        if isinstance(stmt, ast.ParOr):
            return ast.ParOr(self.walk(stmt.left, env), self.walk(stmt.right, env), stmt.span)
        if isinstance(stmt, ast.ParAnd):
            return ast.ParAnd(self.walk(stmt.left, env), self.walk(stmt.right, env), stmt.span)
        if isinstance(stmt, ast.Run):
            raise AssertionError("run statements must be inlined before resolution")
        return stmt


def resolve(stmt: ast.Stmt, file: str = "<input>") -> tuple[ast.Stmt, list[SlotInfo], list[Diagnostic]]:
    resolver = _Resolver(file)
    resolved = resolver.walk(stmt, {})
    return resolved, resolver.slots, resolver.diags


# ---------------------------------------------------------------------------
# Structural checks


def can_complete_instantly(stmt: ast.Stmt) -> bool:
    """Does some static path through `stmt` terminate without pausing?"""
    if isinstance(stmt, (ast.Pause, ast.Stop)):
        return False
    if isinstance(stmt, ast.Loop):
        return False
    if isinstance(stmt, ast.Seq):
        return can_complete_instantly(stmt.first) and can_complete_instantly(stmt.second)
    if isinstance(stmt, ast.When):
        return can_complete_instantly(stmt.then_body) or can_complete_instantly(stmt.else_body)
    if isinstance(stmt, (ast.ParOr, ast.ParAnd)):
        return can_complete_instantly(stmt.left) and can_complete_instantly(stmt.right)
    return True


def _walk_statements(stmt: ast.Stmt) -> Iterable[ast.Stmt]:
    yield stmt
    if isinstance(stmt, ast.Seq):
        yield from _walk_statements(stmt.first)
        yield from _walk_statements(stmt.second)
    elif isinstance(stmt, ast.When):
        yield from _walk_statements(stmt.then_body)
        yield from _walk_statements(stmt.else_body)
    elif isinstance(stmt, (ast.Loop, ast.Space)):
        yield from _walk_statements(stmt.body)
    elif isinstance(stmt, (ast.ParOr, ast.ParAnd)):
        yield from _walk_statements(stmt.left)
        yield from _walk_statements(stmt.right)


def check_loops(stmt: ast.Stmt, file: str) -> list[Diagnostic]:
    out = []
    for node in _walk_statements(stmt):
        if isinstance(node, ast.Loop) and can_complete_instantly(node.body):
            out.append(Diagnostic(
                "E-LOOP-0",
                "loop body has an instantaneous path; every path must cross "
                "a pause or stop",
                node.span.line, node.span.col, file))
    return out


def check_space_bodies(stmt: ast.Stmt, slots: list[SlotInfo], file: str) -> list[Diagnostic]:
    out = []
    for node in _walk_statements(stmt):
        if not isinstance(node, ast.Space):
            continue
        for inner in _walk_statements(node.body):
            if isinstance(inner, (ast.Pause, ast.Stop)):
                out.append(Diagnostic(
                    "E-SPACE-1", "a space body must finish within the instant",
                    inner.span.line, inner.span.col, file))
            elif isinstance(inner, (ast.Space, ast.Prune)):
                out.append(Diagnostic(
                    "E-SPACE-2", "a space body cannot branch or prune",
                    inner.span.line, inner.span.col, file))
            elif isinstance(inner, ast.VarDecl) and inner.spacetime != ast.WORLD_LINE:
                out.append(Diagnostic(
                    "E-SPACE-3",
                    f"a space body may only touch world_line state; "
                    f"{inner.name} is {inner.spacetime}",
                    inner.span.line, inner.span.col, file))
            elif isinstance(inner, ast.HostCall):
                for arg in inner.args:
                    if arg.access == ast.READ or not isinstance(arg.ref, ast.VarRef):
                        continue
                    if arg.ref.slot is None:
                        continue
                    info = slots[arg.ref.slot]
                    if info.spacetime != ast.WORLD_LINE:
                        out.append(Diagnostic(
                            "E-SPACE-3",
                            f"a space body may only write world_line variables; "
                            f"{info.name} is {info.spacetime}",
                            inner.span.line, inner.span.col, file))
    return out


# ---------------------------------------------------------------------------
# Symbolic per-instant paths


@dataclass(frozen=True)
class Access:
    slot: int
    kind: str  # read | write | readwrite
    name: str


@dataclass(frozen=True)
class CallAtom:
    fn: str
    accesses: tuple[Access, ...]
    span: ast.Span

    def describe(self) -> str:
        return f"{self.fn}(...)"


@dataclass(frozen=True)
class EntailAtom:
    """A guard decision; `reads` is the side whose final value it needs."""

    left: str
    right: str
    reads: Access | None
    span: ast.Span

    def describe(self) -> str:
        return f"{self.left} |= {self.right}"


@dataclass(frozen=True)
class DeclMark:
    """A declaration executing mid-path, opening a fresh incarnation.

    A declaration inside a loop body names a new location on every
    iteration, so accesses before and after it in one instant touch
    different cells and must not be treated as conflicting.
    """

    slot: int
    span: ast.Span

    def describe(self) -> str:
        return "declaration"


Atom = object
Lane = tuple


@dataclass(frozen=True)
class SymbolicPath:
    """One way an instant can go: atoms in program order with par lanes."""

    atoms: tuple[tuple[Lane, Atom], ...]
    bodies: tuple[tuple[Atom, ...], ...] = ()


@dataclass
class _Outcome:
    atoms: list
    code: int
    residual: ast.Stmt | None
    bodies: list


def _call_atom(call: ast.HostCall) -> CallAtom:
    accesses = []
    for arg in call.args:
        if isinstance(arg.ref, ast.VarRef) and arg.ref.slot is not None:
            accesses.append(Access(arg.ref.slot, arg.access, arg.ref.name))
    return CallAtom(call.fn, tuple(accesses), call.span)


def _guard_atom(when: ast.When, taken: bool) -> EntailAtom:
    left = when.left.show()
    right = when.right.show()
    # Committing to a branch waits on the side whose growth could overturn
    # the verdict: the right side for then, the left side for else.
    target = when.right if taken else when.left
    reads = None
    if isinstance(target, ast.VarRef) and target.slot is not None:
        reads = Access(target.slot, ast.READ, target.name)
    if taken:
        return EntailAtom(left, right, reads, when.span)
    return EntailAtom(right, left, reads, when.span)


def _sym(stmt: ast.Stmt) -> list[_Outcome]:
    if isinstance(stmt, (ast.Nothing, ast.Prune)):
        return [_Outcome([], 0, None, [])]
    if isinstance(stmt, ast.VarDecl):
        if stmt.slot is None:
            return [_Outcome([], 0, None, [])]
        return [_Outcome([((), DeclMark(stmt.slot, stmt.span))], 0, None, [])]
    if isinstance(stmt, ast.Pause):
        return [_Outcome([], 1, ast.Nothing(), [])]
    if isinstance(stmt, ast.Stop):
        return [_Outcome([], 2, None, [])]
    if isinstance(stmt, ast.HostCall):
        return [_Outcome([((), _call_atom(stmt))], 0, None, [])]
    if isinstance(stmt, ast.Space):
        bodies = []
        for outcome in _sym(stmt.body):
            bodies.append(tuple(atom for _, atom in outcome.atoms))
        return [_Outcome([], 0, None, bodies)]
    if isinstance(stmt, ast.When):
        outcomes = []
        for taken, branch in ((True, stmt.then_body), (False, stmt.else_body)):
            guard = ((), _guard_atom(stmt, taken))
            for sub in _sym(branch):
                outcomes.append(_Outcome([guard] + sub.atoms, sub.code,
                                         sub.residual, sub.bodies))
        return outcomes
    if isinstance(stmt, ast.Seq):
        outcomes = []
        for head in _sym(stmt.first):
            if head.code == 0:
                for tail in _sym(stmt.second):
                    outcomes.append(_Outcome(head.atoms + tail.atoms, tail.code,
                                             tail.residual,
                                             head.bodies + tail.bodies))
            elif head.code == 1:
                residual = ast.Seq(head.residual or ast.Nothing(), stmt.second)
                outcomes.append(_Outcome(head.atoms, 1, residual, head.bodies))
            else:
                outcomes.append(head)
            if len(outcomes) > MAX_OUTCOMES:
                return outcomes[:MAX_OUTCOMES]
        return outcomes
    if isinstance(stmt, ast.Loop):
        outcomes = []
        for body in _sym(stmt.body):
            if body.code == 0:
                # Instantaneous loop: reported separately; cut the unrolling
                # here so path enumeration terminates.
                outcomes.append(_Outcome(body.atoms, 1, stmt, body.bodies))
            elif body.code == 1:
                residual = ast.Seq(body.residual or ast.Nothing(), stmt)
                outcomes.append(_Outcome(body.atoms, 1, residual, body.bodies))
            else:
                outcomes.append(body)
        return outcomes
    if isinstance(stmt, (ast.ParOr, ast.ParAnd)):
        is_and = isinstance(stmt, ast.ParAnd)
        outcomes = []
        for left in _sym(stmt.left):
            for right in _sym(stmt.right):
                atoms = [((0,) + lane, atom) for lane, atom in left.atoms]
                atoms += [((1,) + lane, atom) for lane, atom in right.atoms]
                code = max(left.code, right.code)
                if code == 0 or code == 2:
                    residual = None
                elif is_and and (left.code == 0 or right.code == 0):
                    residual = ast.Nothing()
                else:
                    residual = type(stmt)(left.residual or ast.Nothing(),
                                          right.residual or ast.Nothing())
                outcomes.append(_Outcome(atoms, code, residual,
                                         left.bodies + right.bodies))
                if len(outcomes) > MAX_OUTCOMES:
                    return outcomes[:MAX_OUTCOMES]
        return outcomes
    raise AssertionError(f"no symbolic rule for {type(stmt).__name__}")


def enumerate_paths(stmt: ast.Stmt, max_instants: int = MAX_CONFIGS) -> list[list[SymbolicPath]]:
    """Per-instant path sets, exploring residual configurations to a bound."""
    out: list[list[SymbolicPath]] = []
    seen = {ast.pretty(stmt)}
    frontier = [stmt]
    for _ in range(max_instants):
        if not frontier:
            break
        next_frontier: list[ast.Stmt] = []
        paths: list[SymbolicPath] = []
        for config in frontier:
            for outcome in _sym(config):
                paths.append(SymbolicPath(tuple(outcome.atoms),
                                          tuple(outcome.bodies)))
                if outcome.residual is not None:
                    key = ast.pretty(outcome.residual)
                    if key not in seen:
                        seen.add(key)
                        next_frontier.append(outcome.residual)
        out.append(paths)
        frontier = next_frontier
    return out


# ---------------------------------------------------------------------------
# Causality


def _atom_accesses(atom: Atom) -> tuple[Access, ...]:
    if isinstance(atom, CallAtom):
        return atom.accesses
    if isinstance(atom, EntailAtom):
        return (atom.reads,) if atom.reads else ()
    return ()


def _lanes_comparable(a: Lane, b: Lane) -> bool:
    shorter = min(len(a), len(b))
    return a[:shorter] == b[:shorter]


def _check_atom_list(atoms: list[tuple[Lane, Atom]], slots: list[SlotInfo],
                     file: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def spot(atom: Atom) -> tuple[int, int]:
        return atom.span.line, atom.span.col

    # Accesses conflict only within one incarnation of a variable: a
    # declaration executing mid-instant (loop re-entry) opens a new cell.
    # List order agrees with program order inside every lane chain, and a
    # slot is only visible inside its declaring lane, so a single sweep
    # assigns generations correctly.
    generation: dict[int, int] = {}
    cells: list[list[tuple[int, int, str]]] = []  # per atom: (slot, gen, kind)
    for _, atom in atoms:
        if isinstance(atom, DeclMark):
            generation[atom.slot] = generation.get(atom.slot, 0) + 1
            cells.append([])
            continue
        cells.append([(acc.slot, generation.get(acc.slot, 0), acc.kind)
                      for acc in _atom_accesses(atom)])

    # A single call cannot both write and read one variable.
    for (_, atom), accs in zip(atoms, cells):
        kinds: dict[tuple[int, int], set[str]] = {}
        for slot, gen, kind in accs:
            kinds.setdefault((slot, gen), set()).add(kind)
        for (slot, _), ks in kinds.items():
            if len(ks) > 1:
                line, col = spot(atom)
                diags.append(Diagnostic(
                    "E-CAUSAL-1",
                    f"{atom.describe()} both writes and reads "
                    f"{slots[slot].name} in one instant",
                    line, col, file))

    # At most one readwrite per variable per instant.
    rw_seen: set[tuple[int, int]] = set()
    for (_, atom), accs in zip(atoms, cells):
        for slot, gen, kind in accs:
            if kind == ast.READWRITE:
                if (slot, gen) in rw_seen:
                    line, col = spot(atom)
                    diags.append(Diagnostic(
                        "E-CAUSAL-2",
                        f"{slots[slot].name} is readwritten twice in one "
                        "instant; the outcome would depend on scheduling",
                        line, col, file))
                rw_seen.add((slot, gen))

    if diags:
        return diags

    # Build the precedence graph: program order within a lane chain plus the
    # per-variable write -> readwrite -> read discipline.
    n = len(atoms)
    edges: dict[int, set[int]] = {i: set() for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if _lanes_comparable(atoms[i][0], atoms[j][0]):
                edges[i].add(j)
    by_kind: dict[tuple[int, int, str], list[int]] = {}
    for idx, accs in enumerate(cells):
        for slot, gen, kind in accs:
            by_kind.setdefault((slot, gen, kind), []).append(idx)
    cell_ids = {(slot, gen) for (slot, gen, _) in by_kind}
    for slot, gen in cell_ids:
        writers = by_kind.get((slot, gen, ast.WRITE), [])
        rewriters = by_kind.get((slot, gen, ast.READWRITE), [])
        readers = by_kind.get((slot, gen, ast.READ), [])
        for earlier, later in ((writers, rewriters), (writers, readers),
                               (rewriters, readers)):
            for a in earlier:
                for b in later:
                    if a != b:
                        edges[a].add(b)

    # Cycle detection.
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * n
    stack_path: list[int] = []
    cycle: list[int] = []

    def dfs(node: int) -> bool:
        color[node] = GREY
        stack_path.append(node)
        for succ in edges[node]:
            if color[succ] == GREY:
                cycle.extend(stack_path[stack_path.index(succ):])
                return True
            if color[succ] == WHITE and dfs(succ):
                return True
        stack_path.pop()
        color[node] = BLACK
        return False

    for start in range(n):
        if color[start] == WHITE and dfs(start):
            names = sorted({slots[acc.slot].name
                            for idx in cycle
                            for acc in _atom_accesses(atoms[idx][1])})
            parts = ", ".join(atoms[idx][1].describe() for idx in cycle)
            line, col = atoms[cycle[0]][1].span.line, atoms[cycle[0]][1].span.col
            diags.append(Diagnostic(
                "E-CAUSAL-1",
                f"accesses cannot be ordered within one instant "
                f"(variables {', '.join(names)}; through {parts})",
                line, col, file))
            break
    return diags


def check_causality(stmt: ast.Stmt, slots: list[SlotInfo], file: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    seen_msgs: set[tuple] = set()
    for instant_paths in enumerate_paths(stmt):
        for path in instant_paths:
            found = _check_atom_list(list(path.atoms), slots, file)
            for body in path.bodies:
                found += _check_atom_list([((), atom) for atom in body], slots, file)
            for diag in found:
                key = (diag.code, diag.message)
                if key not in seen_msgs:
                    seen_msgs.add(key)
                    diags.append(diag)
    return diags


# ---------------------------------------------------------------------------
# Entry points


def analyze_source(src: str, file: str = "<input>") -> tuple[Loaded | None, list[Diagnostic]]:
    """Run the whole front end; returns the loaded program and diagnostics."""
    try:
        program = parse(src, file)
    except DiagnosticError as err:
        return None, err.diagnostics
    try:
        stmt = ast.inline(program)
    except ast.InlineError as err:
        code = "E-RECURSION" if "recursive" in str(err) else "E-PROC"
        return None, [Diagnostic(code, str(err), err.span.line, err.span.col, file)]
    resolved, slots, diags = resolve(stmt, file)
    if not diags:
        diags = list(check_loops(resolved, file))
        diags += check_space_bodies(resolved, slots, file)
        if not diags:
            diags += check_causality(resolved, slots, file)
    return Loaded(program, resolved, slots, file), diags


def load_program(src: str, file: str = "<input>") -> Loaded:
    """Like analyze_source but raises DiagnosticError on any error."""
    loaded, diags = analyze_source(src, file)
    errors = [d for d in diags if not d.code.startswith("W-")]
    if errors or loaded is None:
        raise DiagnosticError(errors or diags)
    return loaded
