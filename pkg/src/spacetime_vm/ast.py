"""Abstract syntax of spacetime programs.

Statements are immutable; the runtime rewrites programs into residual
statements between instants instead of mutating them.  Sequencing is
binary and right-nested, so a declaration's scope is simply the second
component of the sequence it heads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Union

# Spacetime annotations: how long a variable's value lives.
SINGLE_SPACE = "single_space"  # carried across instants, never backtracked
SINGLE_TIME = "single_time"    # fresh every instant
WORLD_LINE = "world_line"      # snapshotted into queue nodes, restored on pop

SPACETIMES = (SINGLE_SPACE, SINGLE_TIME, WORLD_LINE)

# Access annotations on host-call arguments.
READ = "read"
WRITE = "write"
READWRITE = "readwrite"

ACCESSES = (READ, WRITE, READWRITE)

TYPE_TAGS = ("LMax", "LMin", "ES", "FSet", "VStore", "CStore")


@dataclass(frozen=True)
class Span:
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class VarRef:
    """A variable occurrence; `slot` is filled in by name resolution."""

    name: str
    slot: int | None = None
    span: Span = Span()

    def show(self) -> str:
        return self.name


@dataclass(frozen=True)
class LocRef:
    """A reference that has been substituted down to a concrete location."""

    location: object
    span: Span = Span()

    def show(self) -> str:
        return str(self.location)


@dataclass(frozen=True)
class Literal:
    """A surface literal; `value` is the lattice value once types are known."""

    text: str
    value: object | None = None
    span: Span = Span()

    def show(self) -> str:
        return self.text


Operand = Union[VarRef, LocRef, Literal]


@dataclass(frozen=True)
class Arg:
    ref: Operand
    access: str = READ


class Stmt:
    """Base class for statements."""

    span: Span


@dataclass(frozen=True)
class Nothing(Stmt):
    span: Span = Span()


@dataclass(frozen=True)
class Pause(Stmt):
    span: Span = Span()


@dataclass(frozen=True)
class Stop(Stmt):
    span: Span = Span()


@dataclass(frozen=True)
class Prune(Stmt):
    span: Span = Span()


@dataclass(frozen=True)
class VarDecl(Stmt):
    type_tag: str
    name: str
    spacetime: str
    init: Literal
    slot: int | None = None
    span: Span = Span()


@dataclass(frozen=True)
class HostCall(Stmt):
    fn: str
    args: tuple[Arg, ...]
    span: Span = Span()


@dataclass(frozen=True)
class When(Stmt):
    left: Operand
    right: Operand
    then_body: Stmt = Nothing()
    else_body: Stmt = Nothing()
    span: Span = Span()


@dataclass(frozen=True)
class Seq(Stmt):
    first: Stmt
    second: Stmt
    span: Span = Span()


@dataclass(frozen=True)
class ParOr(Stmt):
    left: Stmt
    right: Stmt
    span: Span = Span()


@dataclass(frozen=True)
class ParAnd(Stmt):
    left: Stmt
    right: Stmt
    span: Span = Span()


@dataclass(frozen=True)
class Loop(Stmt):
    body: Stmt
    span: Span = Span()


@dataclass(frozen=True)
class Space(Stmt):
    body: Stmt
    span: Span = Span()


@dataclass(frozen=True)
class Run(Stmt):
    proc: str
    args: tuple[VarRef, ...] = ()
    span: Span = Span()


@dataclass(frozen=True)
class ProcDef:
    name: str
    params: tuple[str, ...]
    body: Stmt
    span: Span = Span()


@dataclass(frozen=True)
class Program:
    procs: tuple[ProcDef, ...]
    file: str = "<input>"

    def proc(self, name: str) -> ProcDef | None:
        for p in self.procs:
            if p.name == name:
                return p
        return None


class InlineError(Exception):
    def __init__(self, message: str, span: Span = Span()):
        super().__init__(message)
        self.span = span


def _sub_operand(op: Operand, name: str, replacement: Operand) -> Operand:
    if isinstance(op, VarRef) and op.name == name:
        return replacement
    return op


def substitute(stmt: Stmt, name: str, replacement: Operand) -> Stmt:
    """Replace free occurrences of `name` by `replacement`.

    A declaration of the same name shadows the rest of its sequence, which
    makes the operation idempotent once every occurrence is replaced.
    """
    if isinstance(stmt, Seq):
        first = substitute(stmt.first, name, replacement)
        if isinstance(stmt.first, VarDecl) and stmt.first.name == name:
            return Seq(first, stmt.second, stmt.span)
        return Seq(first, substitute(stmt.second, name, replacement), stmt.span)
    if isinstance(stmt, VarDecl):
        return stmt
    if isinstance(stmt, HostCall):
        args = tuple(Arg(_sub_operand(a.ref, name, replacement), a.access) for a in stmt.args)
        return HostCall(stmt.fn, args, stmt.span)
    if isinstance(stmt, When):
        return When(
            _sub_operand(stmt.left, name, replacement),
            _sub_operand(stmt.right, name, replacement),
            substitute(stmt.then_body, name, replacement),
            substitute(stmt.else_body, name, replacement),
            stmt.span,
        )
    if isinstance(stmt, Loop):
        return Loop(substitute(stmt.body, name, replacement), stmt.span)
    if isinstance(stmt, Space):
        return Space(substitute(stmt.body, name, replacement), stmt.span)
    if isinstance(stmt, ParOr):
        return ParOr(
            substitute(stmt.left, name, replacement),
            substitute(stmt.right, name, replacement),
            stmt.span,
        )
    if isinstance(stmt, ParAnd):
        return ParAnd(
            substitute(stmt.left, name, replacement),
            substitute(stmt.right, name, replacement),
            stmt.span,
        )
    if isinstance(stmt, Run):
        args = tuple(
            replacement if isinstance(a, VarRef) and a.name == name and isinstance(replacement, VarRef) else a
            for a in stmt.args
        )
        return Run(stmt.proc, args, stmt.span)
    return stmt


def free_names(stmt: Stmt, bound: frozenset[str] = frozenset()) -> set[str]:
    """Names referenced by `stmt` that no enclosing declaration binds."""
    out: set[str] = set()

    def ref(op: Operand, bound: frozenset[str]) -> None:
        if isinstance(op, VarRef) and op.name not in bound:
            out.add(op.name)

    def walk(s: Stmt, bound: frozenset[str]) -> None:
        if isinstance(s, Seq):
            walk(s.first, bound)
            if isinstance(s.first, VarDecl):
                bound = bound | {s.first.name}
            walk(s.second, bound)
        elif isinstance(s, HostCall):
            for a in s.args:
                ref(a.ref, bound)
        elif isinstance(s, When):
            ref(s.left, bound)
            ref(s.right, bound)
            walk(s.then_body, bound)
            walk(s.else_body, bound)
        elif isinstance(s, (Loop, Space)):
            walk(s.body, bound)
        elif isinstance(s, (ParOr, ParAnd)):
            walk(s.left, bound)
            walk(s.right, bound)
        elif isinstance(s, Run):
            for a in s.args:
                ref(a, bound)

    walk(stmt, bound)
    return out


def inline(program: Program, entry: str = "main") -> Stmt:
    """Expand every `run` into a copy of the callee with actuals substituted.

    Process calls carry variables by reference, so inlining is pure
    renaming.  Recursive call chains have no finite expansion and are
    rejected.
    """
    main = program.proc(entry)
    if main is None:
        raise InlineError(f"no process named {entry!r}")

    def expand(stmt: Stmt, stack: tuple[str, ...]) -> Stmt:
        if isinstance(stmt, Run):
            callee = program.proc(stmt.proc)
            if callee is None:
                raise InlineError(f"no process named {stmt.proc!r}", stmt.span)
            if stmt.proc in stack:
                cycle = " -> ".join(stack + (stmt.proc,))
                raise InlineError(f"recursive process call: {cycle}", stmt.span)
            if len(callee.params) != len(stmt.args):
                raise InlineError(
                    f"{stmt.proc} takes {len(callee.params)} arguments, got {len(stmt.args)}",
                    stmt.span,
                )
            body = callee.body
            # Two-phase rename so swapped actuals cannot capture each other.
            temps = [VarRef(f"${stmt.proc}${i}") for i in range(len(callee.params))]
            for formal, tmp in zip(callee.params, temps):
                body = substitute(body, formal, tmp)
            for tmp, actual in zip(temps, stmt.args):
                body = substitute(body, tmp.name, actual)
            return expand(body, stack + (stmt.proc,))
        if isinstance(stmt, Seq):
            return Seq(expand(stmt.first, stack), expand(stmt.second, stack), stmt.span)
        if isinstance(stmt, When):
            return When(stmt.left, stmt.right, expand(stmt.then_body, stack),
                        expand(stmt.else_body, stack), stmt.span)
        if isinstance(stmt, Loop):
            return Loop(expand(stmt.body, stack), stmt.span)
        if isinstance(stmt, Space):
            return Space(expand(stmt.body, stack), stmt.span)
        if isinstance(stmt, ParOr):
            return ParOr(expand(stmt.left, stack), expand(stmt.right, stack), stmt.span)
        if isinstance(stmt, ParAnd):
            return ParAnd(expand(stmt.left, stack), expand(stmt.right, stack), stmt.span)
        return stmt

    return expand(main.body, (entry,))


def _seq_items(stmt: Stmt) -> Iterator[Stmt]:
    while isinstance(stmt, Seq):
        yield stmt.first
        stmt = stmt.second
    yield stmt


def _par_items(stmt: Stmt, cls: type) -> Iterator[Stmt]:
    while isinstance(stmt, cls):
        yield stmt.left
        stmt = stmt.right
    yield stmt


def _show_arg(a: Arg) -> str:
    if a.access == READ:
        return a.ref.show()
    return f"{a.access} {a.ref.show()}"


def pretty(stmt: Stmt, indent: int = 0) -> str:
    """Render a statement back to surface syntax."""
    pad = "  " * indent

    def line(text: str) -> str:
        return pad + text

    if isinstance(stmt, Seq):
        return ";\n".join(pretty(s, indent) for s in _seq_items(stmt))
    if isinstance(stmt, Nothing):
        return line("nothing")
    if isinstance(stmt, Pause):
        return line("pause")
    if isinstance(stmt, Stop):
        return line("stop")
    if isinstance(stmt, Prune):
        return line("prune")
    if isinstance(stmt, VarDecl):
        return line(f"{stmt.type_tag} {stmt.name} {stmt.spacetime} = {stmt.init.show()}")
    if isinstance(stmt, HostCall):
        args = ", ".join(_show_arg(a) for a in stmt.args)
        return line(f"{stmt.fn}({args})")
    if isinstance(stmt, When):
        head = line(f"when {stmt.left.show()} |= {stmt.right.show()} then")
        body = pretty(stmt.then_body, indent + 1)
        if isinstance(stmt.else_body, Nothing):
            return f"{head}\n{body}\n{line('end')}"
        alt = pretty(stmt.else_body, indent + 1)
        return f"{head}\n{body}\n{line('else')}\n{alt}\n{line('end')}"
    if isinstance(stmt, Loop):
        return f"{line('loop')}\n{pretty(stmt.body, indent + 1)}\n{line('end')}"
    if isinstance(stmt, Space):
        return f"{line('space')}\n{pretty(stmt.body, indent + 1)}\n{line('end')}"
    if isinstance(stmt, (ParOr, ParAnd)):
        sep = "||" if isinstance(stmt, ParOr) else "<>"
        arms = [pretty(s, indent + 1) for s in _par_items(stmt, type(stmt))]
        joined = f"\n{line(sep)}\n".join(arms)
        return f"{line('par')}\n{joined}\n{line('end')}"
    if isinstance(stmt, Run):
        args = ", ".join(a.show() for a in stmt.args)
        return line(f"run {stmt.proc}({args})")
    return line(f"<{type(stmt).__name__}>")


def pretty_program(program: Program) -> str:
    chunks = []
    for p in program.procs:
        params = f"({', '.join(p.params)})" if p.params else ""
        chunks.append(f"proc {p.name}{params} =\n{pretty(p.body, 1)}")
    return "\n\n".join(chunks) + "\n"
