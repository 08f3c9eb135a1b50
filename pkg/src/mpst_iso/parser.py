"""
Concrete syntax for global types.

    global   := "end" | recvar | "rec" recvar "." global | prefix ";" global | branch
    prefix   := ident "->" ident ":" "<" ident ("," ident)* ">"
    branch   := ident "->" ident ":" "{" arm ("," arm)* "}"
    arm      := ident ":" global

Comments run from ``//`` to the end of the line.  A payload list such as
``<PId, DId>`` is a single sort named ``PId,DId``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import (
    DuplicateLabel,
    ParseError,
    SelfCommunication,
    SourceSpan,
    UnboundRecVar,
    UnguardedRecursion,
)
from .syntax import (
    END,
    Branch,
    End,
    Label,
    Offer,
    Prefix,
    Rec,
    Recv,
    Select,
    Send,
    Seq,
    Sort,
    Type,
    Var,
)

KEYWORDS = {"end", "rec"}
PUNCT = {
    "->": "'->'",
    ":": "':'",
    ";": "';'",
    ",": "','",
    "<": "'<'",
    ">": "'>'",
    "{": "'{'",
    "}": "'}'",
    ".": "'.'",
}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "end", "rec", a punctuation string, or "eof"
    text: str
    span: SourceSpan


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _mark(self):
        return self.line, self.col, self.pos

    def _span(self, start) -> SourceSpan:
        line, col, pos = start
        return SourceSpan(line, col, self.line, self.col, pos, self.pos)

    def tokens(self) -> Iterator[Token]:
        text = self.text
        while True:
            while self.pos < len(text):
                if text[self.pos].isspace():
                    self._advance()
                elif text.startswith("//", self.pos):
                    while self.pos < len(text) and text[self.pos] != "\n":
                        self._advance()
                else:
                    break
            start = self._mark()
            if self.pos >= len(text):
                yield Token("eof", "", self._span(start))
                return
            ch = text[self.pos]
            if text.startswith("->", self.pos):
                self._advance(2)
                yield Token("->", "->", self._span(start))
            elif ch in PUNCT:
                self._advance()
                yield Token(ch, ch, self._span(start))
            elif ch.isascii() and ch.isalpha():
                end = self.pos
                while end < len(text) and text[end].isascii() and (text[end].isalnum() or text[end] == "_"):
                    end += 1
                word = text[self.pos:end]
                self._advance(end - self.pos)
                kind = word if word in KEYWORDS else "ident"
                yield Token(kind, word, self._span(start))
            else:
                self._advance()
                raise ParseError(f"unexpected character {ch!r}", self._span(start))


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_Lexer(text).tokens())
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def take(self, kind: str, what: str | None = None) -> Token:
        tok = self.tok
        if tok.kind != kind:
            expected = what or PUNCT.get(kind, kind)
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {expected}, found {found}", tok.span, [expected])
        self.i += 1
        return tok

    def parse(self) -> Type:
        g = self.global_type(frozenset())
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r} after end of protocol", self.tok.span, ["end of input"])
        return g

    def global_type(self, bound: frozenset[str]) -> Type:
        tok = self.tok
        if tok.kind == "end":
            self.i += 1
            return END
        if tok.kind == "rec":
            self.i += 1
            var = self.take("ident", "recursion variable")
            self.take(".")
            body = self.global_type(bound | {var.text})
            try:
                return Rec(var.text, body)
            except UnguardedRecursion as exc:
                raise UnguardedRecursion(exc.message, _join(tok.span, var.span)) from None
        if tok.kind == "ident":
            if self.peek().kind != "->":
                self.i += 1
                if tok.text not in bound:
                    raise UnboundRecVar(f"recursion variable {tok.text!r} is not bound", tok.span)
                return Var(tok.text)
            return self.communication(bound)
        raise ParseError(
            "expected a global type" if tok.kind != "eof" else "unexpected end of input",
            tok.span,
            ["'end'", "'rec'", "identifier"],
        )

    def communication(self, bound: frozenset[str]) -> Type:
        sender = self.take("ident", "participant")
        self.take("->")
        receiver = self.take("ident", "participant")
        if sender.text == receiver.text:
            raise SelfCommunication(f"{sender.text} communicates with itself", _join(sender.span, receiver.span))
        self.take(":")
        if self.tok.kind == "<":
            self.i += 1
            names = [self.take("ident", "sort").text]
            while self.tok.kind == ",":
                self.i += 1
                names.append(self.take("ident", "sort").text)
            self.take(">")
            self.take(";")
            cont = self.global_type(bound)
            return Seq(Prefix(sender.text, receiver.text, Sort(",".join(names))), cont)
        if self.tok.kind == "{":
            self.i += 1
            arms = []
            seen = set()
            while True:
                label = self.take("ident", "label")
                if label.text in seen:
                    raise DuplicateLabel(f"label {label.text!r} appears twice in one branch", label.span)
                seen.add(label.text)
                self.take(":")
                arms.append((Prefix(sender.text, receiver.text, Label(label.text)), self.global_type(bound)))
                if self.tok.kind == ",":
                    self.i += 1
                    continue
                self.take("}")
                break
            return Branch(tuple(arms))
        raise ParseError("expected '<' or '{' after ':'", self.tok.span, ["'<'", "'{'"])


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.start_line, a.start_col, b.end_line, b.end_col, a.start_offset, b.end_offset)


def parse_global(text: str) -> Type:
    """Parse DSL text into a closed, guarded global type.

    Raises ``ParseError`` for lexical or syntactic problems, and
    ``SelfCommunication``, ``DuplicateLabel``, ``UnboundRecVar`` or
    ``UnguardedRecursion`` for the corresponding formation failures.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing


def _sort_text(sort: Sort, sep: str) -> str:
    return sep.join(sort.name.split(","))


def print_global(g: Type) -> str:
    """Canonical single-line DSL text; ``parse_global`` inverts it."""
    if isinstance(g, End):
        return "end"
    if isinstance(g, Var):
        return g.var
    if isinstance(g, Rec):
        return f"rec {g.var} . {print_global(g.body)}"
    if isinstance(g, Seq):
        p = g.prefix
        return f"{p.sender} -> {p.receiver} : <{_sort_text(p.payload, ', ')}> ; {print_global(g.cont)}"
    if isinstance(g, Branch):
        if len({(p.sender, p.receiver) for p, _ in g.arms}) != 1:
            raise ValueError("branch arms disagree on endpoints; not expressible in the DSL")
        arms = ", ".join(f"{p.payload.name}: {print_global(a)}" for p, a in g.arms)
        return f"{g.sender} -> {g.receiver} : {{{arms}}}"
    raise TypeError(f"not a global type: {g!r}")


def print_local(t: Type) -> str:
    """Local types in ``p!<U>; T`` / ``p?<U>; T`` / ``p ⊕ {..}`` / ``p & {..}`` notation."""
    if isinstance(t, End):
        return "end"
    if isinstance(t, Var):
        return t.var
    if isinstance(t, Rec):
        return f"rec {t.var} . {print_local(t.body)}"
    if isinstance(t, Send):
        return f"{t.peer}!<{t.sort.name}>; {print_local(t.cont)}"
    if isinstance(t, Recv):
        return f"{t.peer}?<{t.sort.name}>; {print_local(t.cont)}"
    if isinstance(t, (Select, Offer)):
        op = "⊕" if isinstance(t, Select) else "&"
        arms = ", ".join(f"{l}: {print_local(a)}" for l, a in t.arms)
        return f"{t.peer} {op} {{{arms}}}"
    raise TypeError(f"not a local type: {t!r}")


def _is_global(t: Type) -> bool:
    while isinstance(t, Rec):
        t = t.body
    return not isinstance(t, (Send, Recv, Select, Offer))


def print_any(t: Type) -> str:
    try:
        return print_global(t) if _is_global(t) else print_local(t)
    except ValueError:
        return repr(t)
