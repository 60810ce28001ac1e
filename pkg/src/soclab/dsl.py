"""A small textual language for wiring processes together.

A diagram file declares named systems and boxes, then optionally builds one
expression out of them::

    # teleport the wire around a loop
    system Q = 2 ;
    box noise : Q -> Q @ "noise.json" ;

    (id[Q] * cup[Q]) ; (noise * id[Q] * id[Q]) ; (cap[Q] * id[Q])

``;`` is sequential composition read left to right (run the left part
first), ``*`` is side-by-side placement and binds tighter.  Builtins are
``id[A]``, ``swap[A,B]``, ``cup[A]``, ``cap[A]`` and ``discard[A]``; ``I``
names the empty type.  Box bodies are loaded from process files, resolved
relative to the diagram's own directory.

Parsing raises :class:`DiagramSyntaxError` and evaluation raises
:class:`DiagramTypeError`, both carrying line and column.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Union

from .errors import DiagramSyntaxError, DiagramTypeError
from .process import (
    Process,
    cap,
    compose_par,
    compose_seq,
    cup,
    discard_process,
    identity_process,
    process_from_dict,
    swap_process,
)
from .tensor import System

KEYWORDS = ("system", "box")
BUILTIN_ARITY = {"id": 1, "swap": 2, "cup": 1, "cap": 1, "discard": 1}
RESERVED = set(KEYWORDS) | set(BUILTIN_ARITY) | {"I"}

PUNCT = ("->", "=", ";", ":", "@", "*", "(", ")", "[", "]", ",")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise DiagramSyntaxError("unterminated string", line, col)
            toks.append(Token("string", text[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                toks.append(Token(p, p, line, col))
                col += len(p)
                i += len(p)
                break
        else:
            raise DiagramSyntaxError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


@dataclass(frozen=True)
class SystemDecl:
    name: str
    size: int
    line: int = field(compare=False, repr=False)
    col: int = field(compare=False, repr=False)


@dataclass(frozen=True)
class BoxDecl:
    name: str
    in_type: tuple[str, ...]
    out_type: tuple[str, ...]
    path: str
    line: int = field(compare=False, repr=False)
    col: int = field(compare=False, repr=False)


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = field(compare=False, repr=False)
    col: int = field(compare=False, repr=False)


@dataclass(frozen=True)
class Builtin:
    kind: str
    args: tuple[str, ...]
    line: int = field(compare=False, repr=False)
    col: int = field(compare=False, repr=False)


@dataclass(frozen=True)
class SeqComp:
    left: "Expr"
    right: "Expr"
    line: int = field(compare=False, repr=False)
    col: int = field(compare=False, repr=False)


@dataclass(frozen=True)
class ParComp:
    left: "Expr"
    right: "Expr"
    line: int = field(compare=False, repr=False)
    col: int = field(compare=False, repr=False)


Expr = Union[Ref, Builtin, SeqComp, ParComp]


@dataclass(frozen=True)
class Program:
    decls: tuple[Union[SystemDecl, BoxDecl], ...]
    expr: Expr | None


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            shown = t.value or t.kind
            raise DiagramSyntaxError(f"expected {kind!r}, found {shown!r}", t.line, t.col)
        return self.advance()

    def parse_program(self) -> Program:
        decls = []
        while self.peek().kind == "name" and self.peek().value in KEYWORDS:
            decls.append(self.parse_decl())
        expr = None
        if self.peek().kind != "eof":
            expr = self.parse_seq()
        self.expect("eof")
        return Program(tuple(decls), expr)

    def parse_decl(self):
        kw = self.advance()
        if kw.value == "system":
            name = self.expect("name")
            self.expect("=")
            size = self.expect("int")
            self.expect(";")
            return SystemDecl(name.value, int(size.value), kw.line, kw.col)
        name = self.expect("name")
        self.expect(":")
        in_type = self.parse_type()
        self.expect("->")
        out_type = self.parse_type()
        self.expect("@")
        path = self.expect("string")
        self.expect(";")
        return BoxDecl(name.value, in_type, out_type, path.value, kw.line, kw.col)

    def parse_type(self) -> tuple[str, ...]:
        first = self.expect("name")
        if first.value == "I":
            return ()
        names = [first.value]
        while self.peek().kind == "*":
            self.advance()
            names.append(self.expect("name").value)
        return tuple(names)

    def parse_seq(self) -> Expr:
        node = self.parse_par()
        while self.peek().kind == ";":
            op = self.advance()
            if self.peek().kind == "eof":
                raise DiagramSyntaxError("expected expression after ';'", op.line, op.col)
            node = SeqComp(node, self.parse_par(), op.line, op.col)
        return node

    def parse_par(self) -> Expr:
        node = self.parse_atom()
        while self.peek().kind == "*":
            op = self.advance()
            node = ParComp(node, self.parse_atom(), op.line, op.col)
        return node

    def parse_atom(self) -> Expr:
        t = self.peek()
        if t.kind == "(":
            self.advance()
            node = self.parse_seq()
            self.expect(")")
            return node
        if t.kind != "name":
            shown = t.value or t.kind
            raise DiagramSyntaxError(f"expected an expression, found {shown!r}", t.line, t.col)
        self.advance()
        if t.value in BUILTIN_ARITY:
            self.expect("[")
            args = [self.expect("name").value]
            while self.peek().kind == ",":
                self.advance()
                args.append(self.expect("name").value)
            self.expect("]")
            want = BUILTIN_ARITY[t.value]
            if len(args) != want:
                raise DiagramSyntaxError(
                    f"{t.value} takes {want} system argument{'s' if want > 1 else ''}, got {len(args)}",
                    t.line,
                    t.col,
                )
            return Builtin(t.value, tuple(args), t.line, t.col)
        return Ref(t.value, t.line, t.col)


def parse(text: str) -> Program:
    return _Parser(tokenize(text)).parse_program()


def unparse(program: Program) -> str:
    lines = []
    for d in program.decls:
        if isinstance(d, SystemDecl):
            lines.append(f"system {d.name} = {d.size} ;")
        else:
            it = " * ".join(d.in_type) if d.in_type else "I"
            ot = " * ".join(d.out_type) if d.out_type else "I"
            lines.append(f'box {d.name} : {it} -> {ot} @ "{d.path}" ;')
    if program.expr is not None:
        lines.append(unparse_expr(program.expr))
    return "\n".join(lines) + "\n"


def unparse_expr(e: Expr) -> str:
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Builtin):
        return f"{e.kind}[{', '.join(e.args)}]"
    if isinstance(e, SeqComp):
        return f"({unparse_expr(e.left)} ; {unparse_expr(e.right)})"
    return f"({unparse_expr(e.left)} * {unparse_expr(e.right)})"


class Environment:
    """Declared systems and boxes of one diagram, ready for evaluation."""

    def __init__(self):
        self.systems: dict[str, int] = {}
        self.boxes: dict[str, Process] = {}

    def resolve_type(self, names: tuple[str, ...], line: int, col: int) -> System:
        dims = []
        for n in names:
            if n not in self.systems:
                raise DiagramTypeError(f"unknown system {n!r}", line, col)
            dims.append(self.systems[n])
        return System(tuple(dims))


def build_environment(program: Program, base_dir: str = ".") -> Environment:
    """Process the declarations, loading each box body from its file.

    File and serialization problems propagate as-is (``OSError``,
    ``json.JSONDecodeError``, :class:`~soclab.errors.DimensionError`); a
    body whose wires disagree with the declared type is a
    :class:`~soclab.errors.DiagramTypeError`.
    """
    env = Environment()
    for d in program.decls:
        if d.name in RESERVED:
            raise DiagramTypeError(f"{d.name!r} is reserved", d.line, d.col)
        if d.name in env.systems or d.name in env.boxes:
            raise DiagramTypeError(f"{d.name!r} declared twice", d.line, d.col)
        if isinstance(d, SystemDecl):
            if d.size < 1:
                raise DiagramTypeError(f"system {d.name!r} must have positive dimension", d.line, d.col)
            env.systems[d.name] = d.size
            continue
        in_sys = env.resolve_type(d.in_type, d.line, d.col)
        out_sys = env.resolve_type(d.out_type, d.line, d.col)
        path = d.path if os.path.isabs(d.path) else os.path.join(base_dir, d.path)
        with open(path) as fh:
            body = process_from_dict(json.load(fh))
        if body.in_sys.dims != in_sys.dims or body.out_sys.dims != out_sys.dims:
            raise DiagramTypeError(
                f"box {d.name!r} declared {in_sys.dims} -> {out_sys.dims} "
                f"but its file holds {body.in_sys.dims} -> {body.out_sys.dims}",
                d.line,
                d.col,
            )
        env.boxes[d.name] = body
    return env


def eval_expr(e: Expr, env: Environment) -> Process:
    if isinstance(e, Ref):
        if e.name not in env.boxes:
            hint = " (it names a system)" if e.name in env.systems else ""
            raise DiagramTypeError(f"unknown box {e.name!r}{hint}", e.line, e.col)
        return env.boxes[e.name]
    if isinstance(e, Builtin):
        systems = [env.resolve_type((a,), e.line, e.col) for a in e.args]
        if e.kind == "id":
            return identity_process(systems[0])
        if e.kind == "swap":
            return swap_process(systems[0], systems[1])
        if e.kind == "cup":
            return cup(systems[0])
        if e.kind == "cap":
            return cap(systems[0])
        return discard_process(systems[0])
    if isinstance(e, SeqComp):
        left = eval_expr(e.left, env)
        right = eval_expr(e.right, env)
        if left.out_sys.dims != right.in_sys.dims:
            raise DiagramTypeError(
                f"cannot chain: left side produces {left.out_sys.dims}, "
                f"right side expects {right.in_sys.dims}",
                e.line,
                e.col,
            )
        return compose_seq(left, right)
    left = eval_expr(e.left, env)
    right = eval_expr(e.right, env)
    return compose_par(left, right)


def evaluate(text: str, base_dir: str = ".") -> Process | None:
    """Parse and run a diagram; ``None`` when it only holds declarations."""
    program = parse(text)
    env = build_environment(program, base_dir)
    if program.expr is None:
        return None
    return eval_expr(program.expr, env)
