"""Surface syntax: parser and renderer for terms and for `.mm` programs.

Process grammar (precedence `.` > `+` > `|`):

    par    := seq ("|" seq)*
    seq    := item ("+" item)*
    item   := "0" | "@" | NAME "[" par "]" | "(" par ")"
            | "!" prefix ["." item] | prefix ["." item]
    prefix := NAME | NAME "!" | NAME "{" par "}"

A prefix without continuation stands for `prefix.0`.  `#` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (HOLE, NIL, In, Loc, Out, Par, Repl, Sum, Term, TermError, Update,
                   canonicalize, check_name)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan | None = None):
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\$[A-Za-z0-9_]+)?)
  | (?P<nil>0)
  | (?P<sym>[|+.!\[\]{}()@])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    span: SourceSpan


def _span(text: str, start: int, end: int) -> SourceSpan:
    line = text.count("\n", 0, start) + 1
    col = start - (text.rfind("\n", 0, start) + 1) + 1
    return SourceSpan(start, end, line, col)


def _tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", _span(text, pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), _span(text, m.start(), m.end())))
        pos = m.end()
    toks.append(_Tok("eof", "", _span(text, pos, pos)))
    return toks


class _Parser:
    def __init__(self, text: str, encoded: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.encoded = encoded
        self.payload_depth = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.take()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.span)
        return tok

    def at(self, text: str) -> bool:
        return self.peek().kind in ("sym", "nil") and self.peek().text == text

    def name(self, tok: _Tok) -> str:
        try:
            return check_name(tok.text, self.encoded)
        except TermError as e:
            raise ParseError(str(e), tok.span) from None

    def parse(self) -> Term:
        t = self.par()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r}", tok.span)
        return t

    def par(self) -> Term:
        items = [self.seq()]
        while self.at("|"):
            self.take()
            items.append(self.seq())
        return items[0] if len(items) == 1 else Par(items)

    def seq(self) -> Term:
        start = self.peek()
        first = self.item()
        if not self.at("+"):
            return first
        branches = []
        for summand, tok in self._summands(first, start):
            if not isinstance(summand, Sum):
                raise ParseError("summands must be prefixed terms", tok.span)
            branches.extend(summand.branches)
        return Sum(branches)

    def _summands(self, first, start):
        yield first, start
        while self.at("+"):
            self.take()
            tok = self.peek()
            yield self.item(), tok

    def item(self) -> Term:
        tok = self.peek()
        if tok.kind == "nil":
            self.take()
            return NIL
        if tok.kind == "sym":
            if tok.text == "@":
                self.take()
                if not self.payload_depth:
                    raise ParseError("hole outside an update payload", tok.span)
                return HOLE
            if tok.text == "(":
                self.take()
                t = self.par()
                self.expect(")")
                return t
            if tok.text == "!":
                self.take()
                return Repl(self.prefix(), self.cont())
            raise ParseError(f"unexpected {tok.text!r}", tok.span)
        if tok.kind == "name":
            if self.peek(1).text == "[" and self.peek(1).kind == "sym":
                self.take()
                self.take()
                body = self.par()
                self.expect("]")
                return Loc(self.name(tok), body)
            p = self.prefix()
            return Sum(((p, self.cont()),))
        raise ParseError("unexpected end of input", tok.span)

    def cont(self) -> Term:
        if self.at("."):
            self.take()
            return self.item()
        return NIL

    def prefix(self):
        tok = self.take()
        if tok.kind != "name":
            raise ParseError(f"expected a name, found {tok.text!r}", tok.span)
        a = self.name(tok)
        if self.at("!"):
            self.take()
            return Out(a)
        if self.at("{"):
            self.take()
            self.payload_depth += 1
            u = self.par()
            self.payload_depth -= 1
            self.expect("}")
            return Update(a, u)
        return In(a)


def parse_process(text: str, encoded: bool = False) -> Term:
    """Parse a process and return its canonical form.

    encoded=True admits `err` and `k$...` names, as emitted by `dyn`.
    """
    return canonicalize(_Parser(text, encoded).parse())


def parse_pattern(text: str, encoded: bool = False) -> Term:
    """Parse an update pattern; holes are allowed anywhere."""
    p = _Parser(text, encoded)
    p.payload_depth = 1
    return canonicalize(p.parse())


# -- rendering --------------------------------------------------------------

def render_prefix(p) -> str:
    if isinstance(p, In):
        return p.name
    if isinstance(p, Out):
        return p.name + "!"
    return p.name + "{" + _render(p.pattern) + "}"


def _render_cont(t: Term) -> str:
    if isinstance(t, Par) or (isinstance(t, Sum) and len(t.branches) > 1):
        return "(" + _render(t) + ")"
    return _render(t)


def _render(t: Term) -> str:
    if isinstance(t, Par):
        return " | ".join(_render(c) for c in t.children)
    if isinstance(t, Loc):
        return t.name + "[" + _render(t.body) + "]"
    if isinstance(t, Sum):
        return " + ".join(render_prefix(p) + "." + _render_cont(c) for p, c in t.branches)
    if isinstance(t, Repl):
        return "!" + render_prefix(t.prefix) + "." + _render_cont(t.body)
    return t.key  # "0" or "@"


def render(t: Term) -> str:
    return _render(canonicalize(t))


# -- Minsky machine programs ------------------------------------------------

_HEADER_RE = re.compile(r"r([01])\s*=\s*(-?\d+)")
_INSTR_RE = re.compile(r"(\d+)\s*:\s*(INC\s+r([01])|DECJ\s+r([01])\s+(\d+)|HALT)")


def parse_mm(text: str):
    from .minsky import Dec, Halt, Inc, MinskyMachine

    regs = [0, 0]
    by_index: dict[int, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        span = SourceSpan(0, 0, lineno, 1)
        if m := _HEADER_RE.fullmatch(line):
            value = int(m.group(2))
            if value < 0:
                raise ParseError("negative register value", span)
            regs[int(m.group(1))] = value
            continue
        m = _INSTR_RE.fullmatch(line)
        if not m:
            raise ParseError(f"cannot parse instruction {line!r}", span)
        idx = int(m.group(1))
        if idx in by_index:
            raise ParseError(f"duplicate instruction index {idx}", span)
        if m.group(3) is not None:
            by_index[idx] = Inc(int(m.group(3)))
        elif m.group(4) is not None:
            by_index[idx] = Dec(int(m.group(4)), int(m.group(5)))
        else:
            by_index[idx] = Halt()
    n = len(by_index)
    if sorted(by_index) != list(range(1, n + 1)):
        raise ParseError("instruction indices must be 1..n")
    for idx, ins in by_index.items():
        if isinstance(ins, Dec) and not 1 <= ins.target <= n:
            raise ParseError(f"instruction {idx} jumps to missing instruction {ins.target}")
    return MinskyMachine(tuple(by_index[i] for i in range(1, n + 1)), tuple(regs))


def render_mm(m) -> str:
    from .minsky import Dec, Inc

    lines = [f"r0={m.init[0]}", f"r1={m.init[1]}"]
    for i, ins in enumerate(m.instrs, 1):
        if isinstance(ins, Inc):
            lines.append(f"{i}: INC r{ins.reg}")
        elif isinstance(ins, Dec):
            lines.append(f"{i}: DECJ r{ins.reg} {ins.target}")
        else:
            lines.append(f"{i}: HALT")
    return "\n".join(lines) + "\n"
