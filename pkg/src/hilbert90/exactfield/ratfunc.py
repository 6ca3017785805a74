"""Rational functions over Q in normalized form.

A ``RatFunc`` is ``num/den`` with ``gcd(num, den) = 1`` and the grlex leading
coefficient of ``den`` equal to 1, so equal values have equal storage.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

from hilbert90.errors import DimensionError, DomainError
from hilbert90.exactfield.poly import MultiPoly, norm_coeff


class RatFunc:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise DimensionError("numerator and denominator at different levels")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        n, d = _normalize(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _make(cls, num: MultiPoly, den: MultiPoly) -> "RatFunc":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls._make(p, MultiPoly.one(p.nvars))

    @classmethod
    def constant(cls, c, nvars: int) -> "RatFunc":
        c = norm_coeff(c)
        return cls._make(MultiPoly.constant(c, nvars), MultiPoly.one(nvars))

    @classmethod
    def zero(cls, nvars: int) -> "RatFunc":
        return cls.constant(0, nvars)

    @classmethod
    def one(cls, nvars: int) -> "RatFunc":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "RatFunc":
        return cls.from_poly(MultiPoly.variable(i, nvars))

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "RatFunc":
        from hilbert90.exactfield.grammar import parse_ratfunc
        return parse_ratfunc(text, nvars)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    # -- predicates ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.den.is_constant() and self.num.is_constant() and self.num.constant_term() == 1

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise DomainError("rational function is not constant")
        return self.num.constant_term()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise DomainError("rational function is not a polynomial")
        return self.num

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise DimensionError(f"level mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DimensionError(f"level mismatch: {self.nvars} vs {other.nvars}")
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction, Rational)):
            return RatFunc.constant(other, self.nvars)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.num.constant_term() == other
        if isinstance(other, MultiPoly):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self) -> "RatFunc":
        return RatFunc._make(-self.num, self.den)

    def __pos__(self) -> "RatFunc":
        return self

    def __add__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            return self
        if not self.num:
            return o
        a, b, c, d = self.num, self.den, o.num, o.den
        if b.is_constant() and d.is_constant():
            return RatFunc._make(a + c, b)
        if b == d:
            return RatFunc._normalized(a + c, b)
        if d.is_constant():
            return RatFunc._make(a + c * b, b)
        if b.is_constant():
            return RatFunc._make(a * d + c, d)
        g = b.gcd(d)
        if g.is_constant():
            return RatFunc._make_monic(a * d + c * b, b * d)
        bg = b.exact_div(g)
        dg = d.exact_div(g)
        num = a * dg + c * bg
        den = b * dg
        return RatFunc._normalized(num, den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return RatFunc.zero(self.nvars)
            return RatFunc._make(self.num.scale(other), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return RatFunc.zero(self.nvars)
        a, b, c, d = self.num, self.den, o.num, o.den
        if b.is_constant() and d.is_constant():
            return RatFunc._make(a * c, b)
        g1 = a.gcd(d) if not d.is_constant() else None
        g2 = c.gcd(b) if not b.is_constant() else None
        if g1 is not None and not g1.is_constant():
            a = a.exact_div(g1)
            d = d.exact_div(g1)
        if g2 is not None and not g2.is_constant():
            c = c.exact_div(g2)
            b = b.exact_div(g2)
        return RatFunc._make_monic(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc._make_monic(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc._make(self.num.scale(Fraction(1) / norm_coeff(other)), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            raise DomainError("rational function powers need an integer exponent")
        if k < 0:
            return self.inverse() ** (-k)
        # coprime num and den stay coprime under powers
        return RatFunc._make(self.num ** k, self.den ** k)

    # -- normalization helpers ----------------------------------------------

    @staticmethod
    def _make_monic(num: MultiPoly, den: MultiPoly) -> "RatFunc":
        """``num/den`` already coprime; only fix the leading coefficient."""
        lc = den.leading_coeff()
        if lc != 1:
            inv = Fraction(1) / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return RatFunc._make(num, den)

    @staticmethod
    def _normalized(num: MultiPoly, den: MultiPoly) -> "RatFunc":
        n, d = _normalize(num, den)
        return RatFunc._make(n, d)

    # -- action, evaluation, level change ------------------------------------

    def permute_variables(self, images: Sequence[int]) -> "RatFunc":
        # a variable permutation keeps coprimality; only the leading term of den can move
        return RatFunc._make_monic(self.num.permute_variables(images), self.den.permute_variables(images))

    def evaluate(self, point: Sequence) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise DomainError("evaluation point is a pole")
        return norm_coeff(Fraction(self.num.evaluate(point)) / d)

    def specialize(self, values: Mapping[int, object]) -> "RatFunc":
        d = self.den.specialize(values)
        if d.is_zero():
            raise DomainError("specialization hits a pole")
        return RatFunc(self.num.specialize(values), d)

    def substitute(self, images: Sequence["RatFunc"]) -> "RatFunc":
        """Replace ``x_i`` by ``images[i-1]`` (rational functions at a common level)."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        m = images[0].nvars
        return _subst_poly(self.num, images, m) / _subst_poly(self.den, images, m)

    def lift(self, m: int) -> "RatFunc":
        return RatFunc._make(self.num.lift(m), self.den.lift(m))

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    def derivative(self, i: int) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative(i) * d - n * d.derivative(i), d * d)

    # -- display ------------------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        from hilbert90.exactfield.grammar import format_ratfunc
        return format_ratfunc(self, names)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RatFunc({self.format()!r}, nvars={self.nvars})"


def _subst_poly(p: MultiPoly, images: Sequence[RatFunc], m: int) -> RatFunc:
    total = RatFunc.zero(m)
    cache: dict[tuple[int, int], RatFunc] = {}
    for e, c in p.terms.items():
        t = RatFunc.constant(c, m)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = images[i] ** k
                t = t * cache[key]
        total = total + t
    return total


def _normalize(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    if not num.terms:
        return MultiPoly.zero(num.nvars), MultiPoly.one(num.nvars)
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
    lc = den.leading_coeff()
    if lc != 1:
        inv = Fraction(1) / lc
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def as_ratfunc(x, nvars: int) -> RatFunc:
    if isinstance(x, RatFunc):
        if x.nvars != nvars:
            raise DimensionError(f"expected level {nvars}, got {x.nvars}")
        return x
    if isinstance(x, MultiPoly):
        return RatFunc.from_poly(x)
    if isinstance(x, str):
        return RatFunc.parse(x, nvars)
    return RatFunc.constant(x, nvars)
