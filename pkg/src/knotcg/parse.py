"""Recursive-descent parsers for knot expressions and cable-family specs.

Grammar (also shipped as docs/grammar.ebnf):

    expr   = [sign] term { sign term } ;
    term   = [ uint "*" ] atom ;
    atom   = word | "(" expr ")" ;
    word   = "U" | "T" "(" stage { ";" stage } ")" ;
    stage  = int "," int ;
    int    = [ "+" | "-" ] uint ;
    family = fterm { "|" fterm } ;
    fterm  = "K" "=" word ";" "q" "=" uint "," uint [ ";" "n" "=" int ] ;
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cg import FamilySpec, FamilyTerm
from .knots import CableWord, KnotExpr

__all__ = ["ParseError", "parse_expression", "parse_family", "parse_word"]


class ParseError(ValueError):
    def __init__(self, message: str, src: str, pos: int):
        self.line = src.count("\n", 0, pos) + 1
        self.col = pos - (src.rfind("\n", 0, pos) + 1) + 1
        self.pos = pos
        self.message = message
        super().__init__(f"{message} at line {self.line}, column {self.col}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


_TOKEN = re.compile(r"(\d+)|([A-Za-z]+)|(\S)")


def _tokenize(src: str) -> list[_Tok]:
    out = []
    for m in _TOKEN.finditer(src):
        if m.group(1) is not None:
            out.append(_Tok("int", m.group(1), m.start()))
        elif m.group(2) is not None:
            out.append(_Tok("name", m.group(2), m.start()))
        else:
            out.append(_Tok(m.group(3), m.group(3), m.start()))
    out.append(_Tok("eof", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{msg}, found {found}", self.src, tok.pos)

    def accept(self, kind: str, text: str | None = None) -> _Tok | None:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> _Tok:
        t = self.accept(kind, text)
        if t is None:
            self.error(f"expected {what or text or kind}")
        return t

    def end(self) -> None:
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")

    def uint(self) -> int:
        return int(self.expect("int", what="an integer").text)

    def sint(self) -> int:
        neg = self.accept("-") is not None
        if not neg:
            self.accept("+")
        n = self.uint()
        return -n if neg else n

    # expressions

    def expr(self) -> KnotExpr:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        out = self.term() * sign
        while self.tok.kind in ("+", "-"):
            sign = -1 if self.accept("-") else 1
            self.accept("+")
            out = out + self.term() * sign
        return out

    def term(self) -> KnotExpr:
        coeff = 1
        if self.tok.kind == "int":
            t = self.tok
            coeff = self.uint()
            if coeff == 0:
                self.error("zero coefficient", t)
            self.expect("*")
        return self.atom() * coeff

    def atom(self) -> KnotExpr:
        if self.tok.kind == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        w = self.word()
        return KnotExpr.of(w)

    def word(self) -> CableWord:
        t = self.tok
        if self.accept("name", "U"):
            return CableWord(())
        if not self.accept("name", "T"):
            self.error("expected 'U', 'T(...)' or '('")
        self.expect("(")
        stages = [self.stage()]
        while self.accept(";"):
            stages.append(self.stage())
        self.expect(")")
        try:
            return CableWord(tuple(stages))
        except ValueError as exc:
            raise ParseError(str(exc), self.src, t.pos) from None

    def stage(self) -> tuple[int, int]:
        p = self.sint()
        self.expect(",")
        return p, self.sint()

    # families

    def family(self) -> FamilySpec:
        terms = [self.fterm()]
        while self.accept("|"):
            terms.append(self.fterm())
        return FamilySpec(tuple(terms))

    def fterm(self) -> FamilyTerm:
        self.expect("name", "K", "'K'")
        self.expect("=")
        knot = self.word()
        self.expect(";")
        self.expect("name", "q", "'q'")
        self.expect("=")
        q1 = self.uint()
        self.expect(",")
        q2 = self.uint()
        n = 1
        if self.accept(";"):
            self.expect("name", "n", "'n'")
            self.expect("=")
            t = self.tok
            n = self.sint()
            if n == 0:
                self.error("zero coefficient", t)
        return FamilyTerm(knot, q1, q2, n)


def parse_expression(src: str) -> KnotExpr:
    p = _Parser(src)
    e = p.expr()
    p.end()
    return e


def parse_word(src: str) -> CableWord:
    p = _Parser(src)
    w = p.word()
    p.end()
    return w


def parse_family(src: str) -> FamilySpec:
    p = _Parser(src)
    f = p.family()
    p.end()
    return f
