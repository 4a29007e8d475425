"""Concrete ASCII syntax for formulas: tokenizer, recursive-descent parser
and a minimally parenthesizing printer.

Precedence, tightest first: prefix operators (! X F G Y wY Finf Ginf @xN
@root), then U / S / wS (right-assoc), &, |, -> (right-assoc), <->.
E, A and ``down xN .`` extend as far to the right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    A, AlmostAlways, Always, And, At, AtRoot, Bind, Const, E, Eventually,
    Formula, Iff, Implies, InfOften, Next, Not, Or, Prev, Prop, Root, Since,
    Until, Var, WeakPrev, WeakSince,
)


class ParseError(ValueError):
    def __init__(self, message: str, start: int, end: int, expected=()):
        self.message = message
        self.start = start
        self.end = end
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at {start}..{end}{detail}")

    def as_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "span": [self.start, self.end],
            "expected": list(self.expected),
        }


class VariableIndexError(ParseError):
    """A variable x0 (indices start at 1)."""


class MalformedBinderError(ParseError):
    """``down`` not followed by ``xN .``."""


@dataclass(frozen=True)
class Token:
    kind: str  # 'id', 'var', 'op', 'eof'
    text: str
    start: int
    end: int


_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|().\[\]@])|(?P<word>[A-Za-z_][A-Za-z0-9_#]*)|(?P<bad>\S))"
)
_VAR = re.compile(r"x(\d+)$")

UNARY_KW = {"X": Next, "F": Eventually, "G": Always, "Y": Prev, "wY": WeakPrev,
            "Finf": InfOften, "Ginf": AlmostAlways}
BINARY_KW = {"U": Until, "S": Since, "wS": WeakSince}
KEYWORDS = set(UNARY_KW) | set(BINARY_KW) | {"E", "A", "down", "root", "true", "false"}
_SPLITTABLE = re.compile(r"[EAXUFGYS]{2,}$")


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        if m.group("op"):
            out.append(Token("op", m.group("op"), m.start("op"), m.end("op")))
        elif m.group("word"):
            w, s = m.group("word"), m.start("word")
            if w not in KEYWORDS and _SPLITTABLE.match(w):
                # "EX", "AG", "EFG" ... are read as runs of one-letter operators
                out.extend(Token("id", ch, s + i, s + i + 1) for i, ch in enumerate(w))
            elif _VAR.match(w):
                out.append(Token("var", w, s, s + len(w)))
            else:
                out.append(Token("id", w, s, s + len(w)))
        else:
            raise ParseError(f"unexpected character {m.group('bad')!r}",
                             m.start("bad"), m.end("bad"))
    out.append(Token("eof", "", len(text), len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("op", "id") and t.text in texts

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str, expected=None) -> Token:
        if not self.at(text):
            t = self.tok
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.start, t.end,
                             expected or [text])
        return self.take()

    def var_index(self, tok: Token) -> int:
        n = int(_VAR.match(tok.text).group(1))
        if n == 0:
            raise VariableIndexError("variable index must be at least 1",
                                     tok.start, tok.end, ["x1", "x2", "..."])
        return n

    # expr := iff
    def expr(self) -> Formula:
        left = self.implication()
        while self.at("<->"):
            self.take()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("|"):
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.binary_temporal()
        while self.at("&"):
            self.take()
            left = And(left, self.binary_temporal())
        return left

    def binary_temporal(self) -> Formula:
        left = self.unary()
        if self.tok.kind == "id" and self.tok.text in BINARY_KW:
            cls = BINARY_KW[self.take().text]
            return cls(left, self.binary_temporal())
        return left

    def unary(self) -> Formula:
        t = self.tok
        if self.at("!"):
            self.take()
            return Not(self.unary())
        if t.kind == "id" and t.text in UNARY_KW:
            self.take()
            return UNARY_KW[t.text](self.unary())
        if self.at("@"):
            self.take()
            t2 = self.tok
            if t2.kind == "var":
                self.take()
                return At(self.var_index(t2), self.unary())
            if self.at("root"):
                self.take()
                return AtRoot(self.unary())
            raise ParseError("'@' must be followed by a variable or 'root'",
                             t2.start, t2.end, ["xN", "root"])
        if self.at("E", "A"):
            self.take()
            return (E if t.text == "E" else A)(self.expr())
        if self.at("down"):
            self.take()
            t2 = self.tok
            if t2.kind != "var":
                raise MalformedBinderError("'down' must be followed by a variable",
                                           t2.start, t2.end, ["xN"])
            self.take()
            idx = self.var_index(t2)
            if not self.at("."):
                t3 = self.tok
                raise MalformedBinderError("binder variable must be followed by '.'",
                                           t3.start, t3.end, ["."])
            self.take()
            return Bind(idx, self.expr())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if self.at("(", "["):
            self.take()
            inner = self.expr()
            self.expect(")" if t.text == "(" else "]")
            return inner
        if t.kind == "var":
            self.take()
            return Var(self.var_index(t))
        if t.kind == "id":
            if t.text == "true":
                self.take()
                return Const(True)
            if t.text == "false":
                self.take()
                return Const(False)
            if t.text == "root":
                self.take()
                return Root()
            if t.text not in KEYWORDS:
                self.take()
                return Prop(t.text)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.start, t.end,
                         ["proposition", "xN", "root", "true", "false", "(", "!", "E", "A",
                          "down", "@", *UNARY_KW])


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.expr()
    if p.tok.kind != "eof":
        t = p.tok
        raise ParseError(f"unexpected {t.text!r} after complete formula", t.start, t.end,
                         ["&", "|", "->", "<->", "U", "S", "wS", "end of input"])
    return f


# ------------------------------------------------------------------ printer

_PREFIX_TEXT = {Next: "X ", Eventually: "F ", Always: "G ", Prev: "Y ",
                WeakPrev: "wY ", InfOften: "Finf ", AlmostAlways: "Ginf "}
# (precedence, symbol, right associative)
_BINARY = {Iff: (1, "<->", False), Implies: (2, "->", True), Or: (3, "|", False),
           And: (4, "&", False), Until: (5, "U", True), Since: (5, "S", True),
           WeakSince: (5, "wS", True)}
_PREFIX_PREC = 6


def print_formula(f: Formula) -> str:
    return _pp(f, 0, True)


def _pp(f: Formula, ctx: int, rightmost: bool) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f"x{f.index}"
    if isinstance(f, Root):
        return "root"
    if isinstance(f, (E, A, Bind)):
        head = {E: "E ", A: "A "}.get(type(f)) or f"down x{f.var} . "
        if isinstance(f, (E, A)) and type(f.arg) in _BINARY:
            body = "(" + _pp(f.arg, 0, True) + ")"  # E (p U q) reads better than E p U q
        else:
            body = _pp(f.arg, 0, True)
        if ctx == 0 or rightmost:
            return head + body
        return "(" + head + body + ")"
    if type(f) in _BINARY:
        prec, sym, right = _BINARY[type(f)]
        if prec < ctx:
            return "(" + _pp(f, 0, True) + ")"
        lctx, rctx = (prec + 1, prec) if right else (prec, prec + 1)
        return f"{_pp(f.left, lctx, False)} {sym} {_pp(f.right, rctx, rightmost)}"
    if isinstance(f, Not):
        return "!" + _pp(f.arg, _PREFIX_PREC, rightmost)
    if isinstance(f, At):
        return f"@x{f.var} " + _pp(f.arg, _PREFIX_PREC, rightmost)
    if isinstance(f, AtRoot):
        return "@root " + _pp(f.arg, _PREFIX_PREC, rightmost)
    if type(f) in _PREFIX_TEXT:
        return _PREFIX_TEXT[type(f)] + _pp(f.arg, _PREFIX_PREC, rightmost)
    raise TypeError(f"cannot print {f!r}")
