"""Tokenizer and recursive-descent parser for types, programs and formulas.

Grammar (loosest first)::

    type    ::= sum ('->' type)?         sum ::= prod ('+' sum)?
    prod    ::= tatom ('*' prod)?        tatom ::= 0 | 1 | int | ref S | (type) | pred tatom

    value   ::= fun (x: type) -> comp | inl value | inr value | vatom
    vatom   ::= x | n | #k | () | (value, ..., value) | (value : type) | (value)

    comp    ::= ret value | let x = comp in comp | init value | !vatom
              | case value of { inl x -> comp | inr y -> comp }
              | match value with (x, y) -> comp
              | letref x [: S] := value, ... in comp
              | vatom := value | vatom vatom | (comp)

    formula ::= disj (('->' | '-*') formula)?
    disj    ::= conj ('\\/' disj)?
    conj    ::= unary (('/\\' | '*') unary)*
    unary   ::= not unary | exists (x:A). formula | forall (x:A). formula
              | mu P(x:A). formula | nu P(x:A). formula | fun (x:A). formula
              | fatom ('(' value, ... ')')*
    fatom   ::= true | false | value '|->' value | value '=' value | P | (formula)

Files may start with ``sort S = type;`` declarations and a
``context x : A, ...;`` line; entailment files separate two formulas by ``|-``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable

from ..values import Arrow, IntT, One, Prod, Ref, Sum, Zero
from . import ast as A

KEYWORDS = {
    "ret", "let", "in", "case", "of", "inl", "inr", "match", "with", "init",
    "letref", "fun", "sort", "context", "true", "false", "exists", "forall",
    "mu", "nu", "not", "ref", "int", "over", "pred",
}

SYMBOLS = [
    "|->", "|-", ":=", "->", "-*", "/\\", "\\/", "(", ")", "{", "}", ",", ";",
    ":", "=", "!", "*", "+", ".", "|",
]

_TOKEN = re.compile(
    r"(?P<ws>\s+|//[^\n]*)"
    r"|(?P<loc>#\d+)"
    r"|(?P<int>-?\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>" + "|".join(re.escape(s) for s in SYMBOLS) + ")"
)


class ParseError(SyntaxError):
    """Syntax error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # ident | kw | int | loc | sym | eof
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, word, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text: str, allow_locs: bool = False) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.allow_locs = allow_locs
        self.furthest: tuple[int, str] = (-1, "")

    # ------------------------------------------------------------ helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text in texts

    def fail(self, message: str) -> None:
        pos = self.tok.pos
        if pos >= self.furthest[0]:
            self.furthest = (pos, message)
        raise _Backtrack()

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        name = self.tok.text
        self.i += 1
        return name

    def attempt(self, fn: Callable[[], Any]) -> Any:
        saved = self.i
        try:
            return fn()
        except _Backtrack:
            self.i = saved
            return None

    def span(self, start: int) -> tuple[int, int]:
        end = self.tokens[self.i - 1].pos + len(self.tokens[self.i - 1].text) if self.i else 0
        return (self.tokens[start].pos, end)

    def run(self, fn: Callable[[], Any]) -> Any:
        try:
            result = fn()
            if self.tok.kind != "eof":
                self.fail(f"unexpected {self.tok.text!r}")
            return result
        except _Backtrack:
            pos, message = self.furthest
            line, col = _line_col(self.text, max(pos, 0))
            raise ParseError(message or "syntax error", line, col) from None

    # ------------------------------------------------------------ types

    def type_(self) -> Any:
        left = self.sum_type()
        if self.at("->"):
            self.i += 1
            return Arrow(left, self.type_())
        return left

    def sum_type(self) -> Any:
        left = self.prod_type()
        if self.at("+"):
            self.i += 1
            return Sum(left, self.sum_type())
        return left

    def prod_type(self) -> Any:
        left = self.type_atom()
        if self.at("*"):
            self.i += 1
            return Prod(left, self.prod_type())
        return left

    def type_atom(self) -> Any:
        tok = self.tok
        if tok.kind == "int" and tok.text in ("0", "1"):
            self.i += 1
            return Zero() if tok.text == "0" else One()
        if self.at("int"):
            self.i += 1
            return IntT()
        if self.at("ref"):
            self.i += 1
            return Ref(self.ident())
        if self.at("pred"):
            self.i += 1
            return A.PredType(self.type_atom())
        if self.at("("):
            self.i += 1
            t = self.type_()
            self.expect(")")
            return t
        self.fail(f"expected a type, found {tok.text or 'end of input'!r}")

    # ------------------------------------------------------------ values

    def value(self) -> Any:
        start = self.i
        if self.at("fun"):
            self.i += 1
            self.expect("(")
            name = self.ident()
            self.expect(":")
            t = self.type_()
            self.expect(")")
            self.expect("->")
            body = self.comp()
            return A.Fun(name, t, body, span=self.span(start))
        return self.value_prefix()

    def value_prefix(self) -> Any:
        start = self.i
        if self.at("inl", "inr"):
            kw = self.tok.text
            self.i += 1
            inner = self.value_prefix()
            node = A.InlV if kw == "inl" else A.InrV
            return node(inner, span=self.span(start))
        return self.value_atom()

    def value_atom(self) -> Any:
        start = self.i
        tok = self.tok
        if tok.kind == "ident":
            self.i += 1
            return A.Var(tok.text, span=self.span(start))
        if tok.kind == "int":
            self.i += 1
            return A.IntLit(int(tok.text), span=self.span(start))
        if tok.kind == "loc":
            if not self.allow_locs:
                self.fail("location literals are only allowed in heaplet/environment literals")
            self.i += 1
            return A.LocLit(int(tok.text[1:]), span=self.span(start))
        if self.at("("):
            self.i += 1
            if self.at(")"):
                self.i += 1
                return A.UnitLit(span=self.span(start))
            first = self.value()
            if self.at(":"):
                self.i += 1
                t = self.type_()
                self.expect(")")
                return A.Ascribe(first, t, span=self.span(start))
            items = [first]
            while self.at(","):
                self.i += 1
                items.append(self.value())
            self.expect(")")
            return _tuple(items, self.span(start))
        self.fail(f"expected a value, found {tok.text or 'end of input'!r}")

    def starts_value_atom(self) -> bool:
        return self.tok.kind in ("ident", "int", "loc") or self.at("(")

    # ------------------------------------------------------------ computations

    def comp(self) -> Any:
        start = self.i
        if self.at("ret"):
            self.i += 1
            return A.Ret(self.value(), span=self.span(start))
        if self.at("let"):
            self.i += 1
            name = self.ident()
            self.expect("=")
            bound = self.comp()
            self.expect("in")
            body = self.comp()
            return A.Let(name, bound, body, span=self.span(start))
        if self.at("init"):
            self.i += 1
            return A.Init(self.value(), span=self.span(start))
        if self.at("!"):
            self.i += 1
            return A.Deref(self.value_atom(), span=self.span(start))
        if self.at("case"):
            self.i += 1
            scrut = self.value()
            self.expect("of")
            self.expect("{")
            if self.at("|"):
                self.i += 1
            self.expect("inl")
            x = self.ident()
            self.expect("->")
            left = self.comp()
            self.expect("|")
            self.expect("inr")
            y = self.ident()
            self.expect("->")
            right = self.comp()
            self.expect("}")
            return A.Case(scrut, x, left, y, right, span=self.span(start))
        if self.at("match"):
            self.i += 1
            scrut = self.value()
            self.expect("with")
            self.expect("(")
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            self.expect("->")
            body = self.comp()
            return A.Match(scrut, x, y, body, span=self.span(start))
        if self.at("letref"):
            self.i += 1
            bindings = [self.binding()]
            while self.at(","):
                self.i += 1
                bindings.append(self.binding())
            self.expect("in")
            body = self.comp()
            return A.Letref(tuple(bindings), body, span=self.span(start))
        result = self.attempt(self.operator_comp)
        if result is not None:
            return result
        if self.at("("):
            self.i += 1
            inner = self.comp()
            self.expect(")")
            return inner
        self.fail(f"expected a computation, found {self.tok.text or 'end of input'!r}")

    def operator_comp(self) -> Any:
        start = self.i
        head = self.value_atom()
        if self.at(":="):
            self.i += 1
            return A.Assign(head, self.value(), span=self.span(start))
        if self.starts_value_atom():
            return A.App(head, self.value_atom(), span=self.span(start))
        self.fail("expected ':=' or an argument")

    def binding(self) -> A.Binding:
        start = self.i
        name = self.ident()
        sort = None
        if self.at(":"):
            self.i += 1
            sort = self.ident()
        self.expect(":=")
        return A.Binding(name, sort, self.value(), span=self.span(start))

    # ------------------------------------------------------------ formulas

    def formula(self) -> Any:
        start = self.i
        left = self.disj()
        if self.at("->", "-*"):
            op = self.tok.text
            self.i += 1
            right = self.formula()
            node = A.Imp if op == "->" else A.Wand
            return node(left, right, span=self.span(start))
        return left

    def disj(self) -> Any:
        start = self.i
        left = self.conj()
        if self.at("\\/"):
            self.i += 1
            return A.Or(left, self.disj(), span=self.span(start))
        return left

    def conj(self) -> Any:
        start = self.i
        left = self.unary()
        while self.at("/\\", "*"):
            op = self.tok.text
            self.i += 1
            right = self.unary()
            node = A.And if op == "/\\" else A.Star
            left = node(left, right, span=self.span(start))
        return left

    def binder_head(self) -> tuple[str, Any]:
        self.expect("(")
        name = self.ident()
        self.expect(":")
        t = self.type_()
        self.expect(")")
        self.expect(".")
        return name, t

    def unary(self) -> Any:
        start = self.i
        if self.at("not"):
            self.i += 1
            return A.Imp(self.unary(), A.Bot(), span=self.span(start))
        if self.at("exists", "forall", "fun"):
            kw = self.tok.text
            self.i += 1
            name, t = self.binder_head()
            body = self.formula()
            node = {"exists": A.Exists, "forall": A.Forall, "fun": A.Abs}[kw]
            return node(name, t, body, span=self.span(start))
        if self.at("mu", "nu"):
            kind = self.tok.text
            self.i += 1
            pname = self.ident()
            name, t = self.binder_head()
            body = self.formula()
            return A.Fix(kind, pname, name, t, body, span=self.span(start))
        node = self.formula_atom()
        while self.at("(") and not _is_value_relation(self, node):
            self.i += 1
            items = [self.value()]
            while self.at(","):
                self.i += 1
                items.append(self.value())
            self.expect(")")
            node = A.PredApp(node, _tuple(items, None), span=self.span(start))
        return node

    def formula_atom(self) -> Any:
        start = self.i
        if self.at("true"):
            self.i += 1
            return A.Top(span=self.span(start))
        if self.at("false"):
            self.i += 1
            return A.Bot(span=self.span(start))
        rel = self.attempt(self.relation)
        if rel is not None:
            return rel
        if self.tok.kind == "ident":
            name = self.ident()
            return A.PVar(name, span=self.span(start))
        if self.at("("):
            self.i += 1
            inner = self.formula()
            self.expect(")")
            return inner
        self.fail(f"expected a formula, found {self.tok.text or 'end of input'!r}")

    def relation(self) -> Any:
        start = self.i
        if self.tok.kind == "ident" and self.peek().text == "(" and self.peek().kind == "sym":
            self.fail("predicate application")
        left = self.value_prefix()
        if self.at("|->"):
            self.i += 1
            return A.PointsTo(left, self.value_prefix(), span=self.span(start))
        if self.at("="):
            self.i += 1
            return A.Eq(left, self.value_prefix(), span=self.span(start))
        self.fail("expected '|->' or '='")

    # ------------------------------------------------------------ files

    def sort_decls(self) -> list[tuple[str, Any]]:
        decls = []
        while self.at("sort"):
            self.i += 1
            name = self.ident()
            self.expect("=")
            t = self.type_()
            self.expect(";")
            decls.append((name, t))
        return decls

    def context(self) -> list[tuple[str, Any]]:
        entries: list[tuple[str, Any]] = []
        if self.at("context"):
            self.i += 1
            if not self.at(";"):
                entries.append(self.context_entry())
                while self.at(","):
                    self.i += 1
                    entries.append(self.context_entry())
            self.expect(";")
        return entries

    def context_entry(self) -> tuple[str, Any]:
        name = self.ident()
        self.expect(":")
        return name, self.type_()


def _is_value_relation(parser: Parser, node: Any) -> bool:
    return isinstance(node, (A.PointsTo, A.Eq, A.Top, A.Bot))


def _tuple(items: list[Any], span: Any) -> Any:
    if len(items) == 1:
        return items[0]
    return A.PairV(items[0], _tuple(items[1:], None), span=span)


# ---------------------------------------------------------------- entry points


def parse_type(text: str) -> Any:
    p = Parser(text)
    return p.run(p.type_)


def parse_value(text: str, allow_locs: bool = False) -> Any:
    p = Parser(text, allow_locs)
    return p.run(p.value)


def parse_program(text: str) -> Any:
    p = Parser(text)
    return p.run(p.comp)


def parse_formula(text: str, allow_locs: bool = False) -> Any:
    p = Parser(text, allow_locs)
    return p.run(p.formula)


def parse_program_file(text: str) -> A.Source:
    p = Parser(text)

    def go() -> A.Source:
        sorts = p.sort_decls()
        return A.Source(tuple(sorts), (), p.comp())

    return p.run(go)


def parse_formula_file(text: str) -> A.Source:
    p = Parser(text)

    def go() -> A.Source:
        sorts = p.sort_decls()
        ctx = p.context()
        return A.Source(tuple(sorts), tuple(ctx), p.formula())

    return p.run(go)


def parse_entailment_file(text: str) -> A.Source:
    p = Parser(text)

    def go() -> A.Source:
        sorts = p.sort_decls()
        ctx = p.context()
        lhs = p.formula()
        p.expect("|-")
        rhs = p.formula()
        return A.Source(tuple(sorts), tuple(ctx), A.Entailment(lhs, rhs))

    return p.run(go)


def parse_sort_decls(text: str) -> list[tuple[str, Any]]:
    p = Parser(text)
    return p.run(p.sort_decls)


def parse_env_literal(text: str) -> list[tuple[str, Any]]:
    """``x = v, y = w`` with location literals allowed."""
    p = Parser(text, allow_locs=True)

    def go() -> list[tuple[str, Any]]:
        out: list[tuple[str, Any]] = []
        if p.tok.kind == "eof":
            return out
        while True:
            name = p.ident()
            p.expect("=")
            out.append((name, p.value()))
            if not p.at(","):
                return out
            p.i += 1

    return p.run(go)


def parse_heaplet_literal(text: str) -> tuple[list[tuple[int, str]], list[tuple[int, Any]]]:
    """``over {#0:Int, #1:RInt} { #0 -> 5 }``: the over-world layout and the filled cells."""
    p = Parser(text, allow_locs=True)

    def loc() -> int:
        if p.tok.kind != "loc":
            p.fail(f"expected a location, found {p.tok.text or 'end of input'!r}")
        n = int(p.tok.text[1:])
        p.i += 1
        return n

    def go():
        p.expect("over")
        p.expect("{")
        layout = []
        while not p.at("}"):
            l = loc()
            p.expect(":")
            layout.append((l, p.ident()))
            if not p.at(","):
                break
            p.i += 1
        p.expect("}")
        p.expect("{")
        cells = []
        while not p.at("}"):
            l = loc()
            p.expect("->")
            cells.append((l, p.value()))
            if not p.at(","):
                break
            p.i += 1
        p.expect("}")
        return layout, cells

    return p.run(go)
