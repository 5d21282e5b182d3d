"""Recursive-descent parser for the spacetime surface syntax.

Grammar sketch (statements are separated by `;`, blocks closed by `end`):

    program  := procdef+
    procdef  := 'proc' NAME [ '(' NAME (',' NAME)* ')' ] '=' seq
    seq      := stmt (';' stmt)* [';']
    stmt     := 'nothing' | 'pause' | 'stop' | 'prune'
              | 'loop' seq 'end'
              | 'space' seq 'end'
              | 'par' [sep] seq (sep seq)* 'end'        sep := '||' | '<>'
              | 'when' ref '|=' operand 'then' seq ['else' seq] 'end'
              | 'run' NAME [ '(' ref (',' ref)* ')' ]
              | TYPE NAME LIFETIME '=' literal          declaration
              | ref '<-' expr                           tell (join-write)
              | NAME '(' [arg (',' arg)*] ')'           host call
    arg      := ['read' | 'write' | 'readwrite'] operand
    literal  := ['-'] INT | 'true' | 'false' | 'unknown' | 'bot'
              | '{' [INT (',' INT)*] '}'

A tell `x <- e` is sugar for a host call that joins `e` into `x`:
`join_into(write x, e)` when `e` is a variable or literal, and
`f(write x, args...)` when `e` is a call `f(args...)`.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .diagnostics import Diagnostic, DiagnosticError

KEYWORDS = {
    "nothing", "pause", "stop", "loop", "end", "par", "space", "prune",
    "when", "then", "else", "proc", "run",
    "single_space", "single_time", "world_line",
    "true", "false", "unknown", "bot",
    "read", "write", "readwrite",
}

SYMBOLS = ("|=", "||", "<>", "<-", ";", "=", "(", ")", "{", "}", ",", "-")


@dataclass(frozen=True)
class Token:
    kind: str   # 'ident', 'int', a keyword, or a symbol
    text: str
    line: int
    col: int


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.render())
        self.diagnostic = diagnostic


def tokenize(src: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("//", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if src.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(Diagnostic(
                "E-PARSE", f"unexpected character {ch!r}", line, col, file))
    tokens.append(Token("eof", "", line, col))
    return tokens


class Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.tokens = tokens
        self.pos = 0
        self.file = file
        self.errors: list[Diagnostic] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind == kind:
            return self.next()
        want = what or f"{kind!r}"
        found = tok.text or "end of input"
        raise ParseError(Diagnostic(
            "E-PARSE", f"expected {want}, found {found!r}",
            tok.line, tok.col, self.file))

    def span(self, tok: Token) -> ast.Span:
        return ast.Span(tok.line, tok.col)

    # -- error recovery ----------------------------------------------------

    def recover(self) -> None:
        """Skip to the next statement separator or block boundary."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if tok.kind in ("loop", "par", "space", "when"):
                depth += 1
            elif tok.kind == "end":
                if depth == 0:
                    return
                depth -= 1
            elif tok.kind in (";", "proc") and depth == 0:
                return
            self.next()

    # -- grammar -----------------------------------------------------------

    def parse_program(self) -> ast.Program:
        procs: list[ast.ProcDef] = []
        while not self.at("eof"):
            try:
                procs.append(self.parse_proc())
            except ParseError as err:
                self.errors.append(err.diagnostic)
                self.recover()
                while not self.at("proc") and not self.at("eof"):
                    self.next()
        if self.errors:
            raise DiagnosticError(self.errors)
        if not procs:
            raise DiagnosticError([Diagnostic(
                "E-PARSE", "a program needs at least one process definition",
                1, 1, self.file)])
        return ast.Program(tuple(procs), self.file)

    def parse_proc(self) -> ast.ProcDef:
        head = self.expect("proc", "a process definition")
        name = self.expect("ident", "a process name")
        params: list[str] = []
        if self.accept("("):
            if not self.at(")"):
                params.append(self.expect("ident", "a parameter name").text)
                while self.accept(","):
                    params.append(self.expect("ident", "a parameter name").text)
            self.expect(")")
        self.expect("=")
        body = self.parse_seq()
        return ast.ProcDef(name.text, tuple(params), body, self.span(head))

    SEQ_FOLLOW = ("end", "else", "||", "<>", "proc", "eof")

    def parse_seq(self) -> ast.Stmt:
        stmts = [self.parse_stmt()]
        while self.accept(";"):
            if self.peek().kind in self.SEQ_FOLLOW:
                break  # trailing separator
            stmts.append(self.parse_stmt())
        out = stmts[-1]
        for s in reversed(stmts[:-1]):
            out = ast.Seq(s, out, s.span)
        return out

    def parse_stmt(self) -> ast.Stmt:
        tok = self.peek()
        if tok.kind == "nothing":
            return ast.Nothing(self.span(self.next()))
        if tok.kind == "pause":
            return ast.Pause(self.span(self.next()))
        if tok.kind == "stop":
            return ast.Stop(self.span(self.next()))
        if tok.kind == "prune":
            return ast.Prune(self.span(self.next()))
        if tok.kind == "loop":
            self.next()
            body = self.parse_seq()
            self.expect("end")
            return ast.Loop(body, self.span(tok))
        if tok.kind == "space":
            self.next()
            body = self.parse_seq()
            self.expect("end")
            return ast.Space(body, self.span(tok))
        if tok.kind == "par":
            return self.parse_par()
        if tok.kind == "when":
            return self.parse_when()
        if tok.kind == "run":
            return self.parse_run()
        if tok.kind == "ident":
            if self.peek(1).kind == "ident" and self.peek(2).kind in ast.SPACETIMES:
                return self.parse_decl()
            if self.peek(1).kind == "<-":
                return self.parse_tell()
            if self.peek(1).kind == "(":
                return self.parse_call()
            nxt = self.peek(1)
            raise ParseError(Diagnostic(
                "E-PARSE",
                f"expected a declaration, tell or call after {tok.text!r}",
                nxt.line, nxt.col, self.file))
        raise ParseError(Diagnostic(
            "E-PARSE", f"expected a statement, found {tok.text or 'end of input'!r}",
            tok.line, tok.col, self.file))

    def parse_par(self) -> ast.Stmt:
        head = self.expect("par")
        sep = None
        if self.at("||") or self.at("<>"):
            sep = self.next().kind
        arms = [self.parse_seq()]
        while self.at("||") or self.at("<>"):
            tok = self.next()
            if sep is None:
                sep = tok.kind
            elif tok.kind != sep:
                raise ParseError(Diagnostic(
                    "E-PARSE", "cannot mix '||' and '<>' in one par block",
                    tok.line, tok.col, self.file))
            arms.append(self.parse_seq())
        self.expect("end")
        if len(arms) == 1:
            return arms[0]
        cls = ast.ParAnd if sep == "<>" else ast.ParOr
        out = arms[-1]
        for arm in reversed(arms[:-1]):
            out = cls(arm, out, self.span(head))
        return out

    def parse_when(self) -> ast.Stmt:
        head = self.expect("when")
        left = self.parse_ref("a variable on the left of '|='")
        self.expect("|=")
        right = self.parse_operand("a variable or literal on the right of '|='")
        self.expect("then")
        then_body = self.parse_seq()
        else_body: ast.Stmt = ast.Nothing()
        if self.accept("else"):
            else_body = self.parse_seq()
        self.expect("end")
        return ast.When(left, right, then_body, else_body, self.span(head))

    def parse_run(self) -> ast.Stmt:
        head = self.expect("run")
        name = self.expect("ident", "a process name")
        args: list[ast.VarRef] = []
        if self.accept("("):
            if not self.at(")"):
                args.append(self.parse_ref("an argument variable"))
                while self.accept(","):
                    args.append(self.parse_ref("an argument variable"))
            self.expect(")")
        return ast.Run(name.text, tuple(args), self.span(head))

    def parse_decl(self) -> ast.Stmt:
        type_tok = self.next()
        if type_tok.text not in ast.TYPE_TAGS:
            raise ParseError(Diagnostic(
                "E-PARSE",
                f"unknown type {type_tok.text!r} (one of: {', '.join(ast.TYPE_TAGS)})",
                type_tok.line, type_tok.col, self.file))
        name = self.expect("ident", "a variable name")
        st = self.next().kind
        self.expect("=")
        init = self.parse_literal()
        return ast.VarDecl(type_tok.text, name.text, st, init, span=self.span(type_tok))

    def parse_tell(self) -> ast.Stmt:
        target = self.parse_ref("a variable")
        arrow = self.expect("<-")
        if self.at("ident") and self.peek(1).kind == "(":
            call = self.parse_call()
            args = (ast.Arg(target, ast.WRITE),) + call.args
            return ast.HostCall(call.fn, args, self.span(arrow))
        value = self.parse_operand("a variable, literal or call")
        return ast.HostCall(
            "join_into", (ast.Arg(target, ast.WRITE), ast.Arg(value, ast.READ)),
            self.span(arrow))

    def parse_call(self) -> ast.HostCall:
        name = self.expect("ident", "a function name")
        self.expect("(")
        args: list[ast.Arg] = []
        if not self.at(")"):
            args.append(self.parse_arg())
            while self.accept(","):
                args.append(self.parse_arg())
        self.expect(")")
        return ast.HostCall(name.text, tuple(args), self.span(name))

    def parse_arg(self) -> ast.Arg:
        access = ast.READ
        tok = self.peek()
        if tok.kind in ("read", "write", "readwrite"):
            access = tok.kind
            self.next()
        ref = self.parse_operand("a variable or literal argument")
        return ast.Arg(ref, access)

    def parse_ref(self, what: str) -> ast.VarRef:
        tok = self.expect("ident", what)
        return ast.VarRef(tok.text, span=self.span(tok))

    def parse_operand(self, what: str) -> ast.Operand:
        tok = self.peek()
        if tok.kind == "ident":
            return self.parse_ref(what)
        if tok.kind in ("int", "-", "true", "false", "unknown", "bot", "{"):
            return self.parse_literal()
        raise ParseError(Diagnostic(
            "E-PARSE", f"expected {what}, found {tok.text or 'end of input'!r}",
            tok.line, tok.col, self.file))

    def parse_literal(self) -> ast.Literal:
        tok = self.peek()
        if tok.kind == "-":
            self.next()
            num = self.expect("int", "a number")
            return ast.Literal(f"-{num.text}", span=self.span(tok))
        if tok.kind == "int":
            self.next()
            return ast.Literal(tok.text, span=self.span(tok))
        if tok.kind in ("true", "false", "unknown", "bot"):
            self.next()
            return ast.Literal(tok.text, span=self.span(tok))
        if tok.kind == "{":
            self.next()
            items: list[str] = []
            if not self.at("}"):
                items.append(self._set_element())
                while self.accept(","):
                    items.append(self._set_element())
            self.expect("}")
            return ast.Literal("{" + ",".join(items) + "}", span=self.span(tok))
        raise ParseError(Diagnostic(
            "E-PARSE", f"expected a literal, found {tok.text or 'end of input'!r}",
            tok.line, tok.col, self.file))

    def _set_element(self) -> str:
        if self.accept("-"):
            return f"-{self.expect('int', 'a number').text}"
        return self.expect("int", "a number").text


def parse(src: str, file: str = "<input>") -> ast.Program:
    """Parse a program, raising DiagnosticError with every error found."""
    try:
        tokens = tokenize(src, file)
    except ParseError as err:
        raise DiagnosticError([err.diagnostic]) from None
    return Parser(tokens, file).parse_program()
