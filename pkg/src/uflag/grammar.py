"""Text grammar for Hopf classes.

Generators are written ``g[k,l]``, ``a[n]`` and ``1[n]``; ``*`` is the cup
product with postfix ``^e`` powers, ``o`` the transfer product, ``+`` the
sum.  Cup binds tighter than ``o``, which binds tighter than ``+``;
whitespace is insignificant.  ``0`` denotes the zero class.  Canonical
printing uses the same grammar, so parse(format(c)) == c.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import hopf
from .f2linalg import MalformedInputError
from .hopf import HopfClass, Mono


class ParseError(MalformedInputError):
    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position

    def caret_line(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


@dataclass
class _Token:
    kind: str  # 'gen', 'op', 'int', 'end'
    value: object
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+*^":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "o":
            tokens.append(_Token("op", "o", i))
            i += 1
            continue
        bracketed = i + 1 < n and text[i + 1] == "["
        if ch in "ga" or (ch == "1" and bracketed):
            start = i
            i += 1
            if i >= n or text[i] != "[":
                raise ParseError(f"expected '[' after {ch!r}", text, i if i < n else n)
            i += 1
            nums = []
            while True:
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j == i:
                    raise ParseError("expected an integer", text, i)
                nums.append(int(text[i:j]))
                i = j
                if i < n and text[i] == ",":
                    i += 1
                    continue
                if i < n and text[i] == "]":
                    i += 1
                    break
                raise ParseError("expected ',' or ']'", text, i if i < n else n)
            tokens.append(_Token("gen", (ch, *nums), start))
            continue
        if ch == "0" and not bracketed and not (i + 1 < n and text[i + 1].isdigit()):
            tokens.append(_Token("gen", ("zero",), i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", int(text[i:j]), i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", text, i)
    tokens.append(_Token("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> HopfClass:
        c = self.parse_sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError("trailing input", self.text, tok.pos)
        return c

    def parse_sum(self) -> HopfClass:
        acc = self.parse_odot()
        while self.peek().kind == "op" and self.peek().value == "+":
            tok = self.next()
            rhs = self.parse_odot()
            try:
                acc = acc + rhs
            except MalformedInputError as exc:
                raise ParseError(str(exc), self.text, tok.pos) from exc
        return acc

    def parse_odot(self) -> HopfClass:
        acc = self.parse_cup()
        while self.peek().kind == "op" and self.peek().value == "o":
            self.next()
            acc = hopf.odot(acc, self.parse_cup())
        return acc

    def parse_cup(self) -> HopfClass:
        acc = self.parse_power()
        while self.peek().kind == "op" and self.peek().value == "*":
            self.next()
            acc = hopf.cup(acc, self.parse_power())
        return acc

    def parse_power(self) -> HopfClass:
        base = self.parse_atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            tok = self.next()
            etok = self.next()
            if etok.kind != "int":
                raise ParseError("expected an integer exponent", self.text, etok.pos)
            e = etok.value
            if e < 1:
                raise ParseError("exponent must be positive", self.text, etok.pos)
            acc = base
            for _ in range(e - 1):
                acc = hopf.cup(acc, base)
            return acc
        return base

    def parse_atom(self) -> HopfClass:
        tok = self.next()
        if tok.kind != "gen":
            raise ParseError("expected a generator", self.text, tok.pos)
        tag = tok.value
        try:
            if tag[0] == "zero":
                return hopf.zero()
            if tag[0] == "g":
                if len(tag) != 3:
                    raise MalformedInputError("g needs two subscripts")
                return hopf.generator_class(hopf.gamma(tag[1], tag[2]))
            if tag[0] == "a":
                if len(tag) != 2:
                    raise MalformedInputError("a needs one subscript")
                return hopf.generator_class(hopf.alpha(tag[1]))
            if len(tag) != 2:
                raise MalformedInputError("1 needs one subscript")
            if tag[1] == 0:
                return hopf.one(0)
            return hopf.generator_class(hopf.unit(tag[1]))
        except MalformedInputError as exc:
            raise ParseError(str(exc), self.text, tok.pos) from exc


def parse_class(text: str) -> HopfClass:
    return _Parser(text).parse()


def format_block(b: hopf.GatheredBlock) -> str:
    if not b.exps:
        return f"1[{b.component}]"
    parts = []
    for k, e in sorted(b.exps, key=lambda t: -t[0]):
        name = f"g[{k},{b.component >> k}]" if k >= 1 else f"a[{b.component}]"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_mono(m: Mono) -> str:
    if not m:
        return "1[0]"
    return " o ".join(format_block(b) for b in m)


def mono_sort_key(m: Mono):
    return tuple(hopf.block_sort_key(b) for b in m)


def format_class(c: HopfClass) -> str:
    if c.is_zero():
        return "0"
    return " + ".join(format_mono(m) for m in sorted(c.terms, key=mono_sort_key))
