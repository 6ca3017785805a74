"""Text form of polynomials and rational functions.

Grammar (usual precedence, ``^`` binds tightest, unary minus below it)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | "x" INT | "(" expr ")"

Printing emits terms in decreasing grlex order, e.g. ``x1^2+2*x1*x2-3/4*x3+1``,
and ``num/den`` with parentheses wherever re-parsing would need them.  A
printed value parses back to an identical normalized value.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from hilbert90.errors import DimensionError, ParseError
from hilbert90.exactfield.poly import MultiPoly, grlex_key
from hilbert90.exactfield.ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    pos = 0
    out: list[tuple[str, object]] = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        if m.group(1) is not None:
            out.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            idx = int(m.group(2))
            if idx < 1:
                raise ParseError("variable indices start at 1")
            out.append(("var", idx))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, nvars: int):
        self.toks = tokens
        self.i = 0
        self.n = nvars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take_op(self, *ops) -> str | None:
        kind, val = self.peek()
        if kind == "op" and val in ops:
            self.i += 1
            return val
        return None

    def expr(self) -> RatFunc:
        v = self.term()
        while (op := self.take_op("+", "-")) is not None:
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> RatFunc:
        v = self.unary()
        while (op := self.take_op("*", "/")) is not None:
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ParseError("division by zero in expression")
                v = v / w
        return v

    def unary(self) -> RatFunc:
        op = self.take_op("-", "+")
        if op == "-":
            return -self.unary()
        if op == "+":
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.take_op("^") is not None:
            neg = self.take_op("-") is not None
            kind, val = self.peek()
            if kind != "int":
                raise ParseError("exponent must be an integer literal")
            self.i += 1
            k = -val if neg else val
            if k < 0 and base.is_zero():
                raise ParseError("negative power of zero")
            return base ** k
        return base

    def atom(self) -> RatFunc:
        kind, val = self.peek()
        if kind == "int":
            self.i += 1
            return RatFunc.constant(val, self.n)
        if kind == "var":
            self.i += 1
            return RatFunc.variable(val, self.n)
        if self.take_op("(") is not None:
            v = self.expr()
            if self.take_op(")") is None:
                raise ParseError("missing closing parenthesis")
            return v
        raise ParseError(f"unexpected token {val!r}" if kind else "unexpected end of input")


def parse_ratfunc(text: str, nvars: int | None = None) -> RatFunc:
    """Parse ``text``; the level defaults to the largest variable index used."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    used = max((v for k, v in toks if k == "var"), default=0)
    if nvars is None:
        nvars = used
    elif used > nvars:
        raise DimensionError(f"x{used} does not exist at level {nvars}")
    p = _Parser(toks, nvars)
    v = p.expr()
    if p.i != len(toks):
        raise ParseError(f"trailing input at token {p.i}")
    return v


def parse_poly(text: str, nvars: int | None = None) -> MultiPoly:
    r = parse_ratfunc(text, nvars)
    if not r.is_polynomial():
        raise ParseError("expression is not a polynomial")
    return r.num.scale(Fraction(1) / r.den.constant_term())


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _monomial_str(e: tuple[int, ...], names: Sequence[str] | None) -> str:
    parts = []
    for i, k in enumerate(e):
        if k:
            name = names[i] if names else f"x{i + 1}"
            parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in sorted(p.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True):
        mono = _monomial_str(e, names)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _coeff_str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_coeff_str(a)}*{mono}"
        if out:
            out.append(("-" if neg else "+") + body)
        else:
            out.append(("-" if neg else "") + body)
    return "".join(out)


def format_ratfunc(f: RatFunc, names: Sequence[str] | None = None) -> str:
    num = format_poly(f.num, names)
    if f.den.is_constant():
        return num
    if len(f.num.terms) > 1:
        num = f"({num})"
    d = f.den
    if len(d.terms) == 1 and len(d.variables()) == 1:
        den = format_poly(d, names)
    else:
        den = f"({format_poly(d, names)})"
    return f"{num}/{den}"
