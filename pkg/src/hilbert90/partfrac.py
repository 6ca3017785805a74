"""Univariate polynomials in ``t`` over ``K = Q(x_1..x_n)`` and partial fractions.

The factorization of the denominator is supplied by the caller; factors must
be monic in ``t`` and pairwise coprime (checked by the Euclidean algorithm
in ``K[t]``).  Irreducibility is only recorded, never verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from hilbert90.errors import DimensionError, DomainError
from hilbert90.exactfield import MultiPoly, RatFunc, as_ratfunc


class TPoly:
    """``sum_k coeffs[k] t^k`` with ``RatFunc`` coefficients at level ``nvars``."""

    __slots__ = ("coeffs", "nvars")

    def __init__(self, coeffs: Sequence[object], nvars: int):
        cs = [as_ratfunc(c, nvars) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.nvars = nvars

    @classmethod
    def _raw(cls, coeffs: list[RatFunc], nvars: int) -> "TPoly":
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        p.nvars = nvars
        return p

    @classmethod
    def t(cls, nvars: int) -> "TPoly":
        return cls([0, 1], nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "TPoly":
        return cls([c], nvars)

    @classmethod
    def from_ratfunc(cls, f: RatFunc, t_index: int) -> "TPoly":
        """Read ``f`` (polynomial in ``x_{t_index}``, which must be the last variable) as a polynomial in ``t``."""
        n = f.nvars
        if t_index != n:
            raise DimensionError("t must be the last variable")
        if f.den.degree_in(t_index) > 0:
            raise DomainError("denominator depends on t")
        parts = f.num.coefficients_in(t_index)
        deg = max(parts, default=-1)
        den = RatFunc.from_poly(f.den.lift(n - 1))
        out = []
        for k in range(deg + 1):
            p = parts.get(k)
            out.append(RatFunc.from_poly(p.lift(n - 1)) / den if p is not None else RatFunc.zero(n - 1))
        return cls._raw(out, n - 1)

    def to_ratfunc(self) -> RatFunc:
        """Embed in ``Q(x_1..x_n, x_{n+1})`` with ``t = x_{n+1}``."""
        m = self.nvars + 1
        t = RatFunc.variable(m, m)
        out = RatFunc.zero(m)
        for c in reversed(self.coeffs):
            out = out * t + c.lift(m)
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> RatFunc:
        return self.coeffs[-1] if self.coeffs else RatFunc.zero(self.nvars)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.nvars, self.coeffs))

    def _check(self, other: "TPoly") -> None:
        if self.nvars != other.nvars:
            raise DimensionError("coefficient fields differ")

    def __add__(self, other: "TPoly") -> "TPoly":
        self._check(other)
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        return TPoly._raw([x + b[i] if i < len(b) else x for i, x in enumerate(a)], self.nvars)

    def __neg__(self) -> "TPoly":
        return TPoly._raw([-c for c in self.coeffs], self.nvars)

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other) -> "TPoly":
        if not isinstance(other, TPoly):
            c = as_ratfunc(other, self.nvars)
            return TPoly._raw([x * c for x in self.coeffs], self.nvars)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return TPoly._raw([], self.nvars)
        zero = RatFunc.zero(self.nvars)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return TPoly._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TPoly":
        out = TPoly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "TPoly") -> tuple["TPoly", "TPoly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial in t")
        r = list(self.coeffs)
        d = other.degree
        inv = other.lc().inverse()
        q = [RatFunc.zero(self.nvars)] * max(len(r) - d, 0)
        for k in range(len(r) - 1, d - 1, -1):
            c = r[k]
            if not c:
                continue
            c = c * inv
            q[k - d] = c
            for j, b in enumerate(other.coeffs):
                if b:
                    r[k - d + j] = r[k - d + j] - c * b
        return TPoly._raw(q, self.nvars), TPoly._raw(r[:d] if d > 0 else [], self.nvars)

    def __mod__(self, other: "TPoly") -> "TPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "TPoly") -> "TPoly":
        return self.divmod(other)[0]

    def monic(self) -> "TPoly":
        return self * self.lc().inverse()

    def gcd(self, other: "TPoly") -> "TPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def xgcd(self, other: "TPoly") -> tuple["TPoly", "TPoly", "TPoly"]:
        """``(g, u, v)`` with ``u self + v other = g`` monic."""
        one, zero = TPoly.constant(1, self.nvars), TPoly._raw([], self.nvars)
        r0, r1 = self, other
        s0, s1 = one, zero
        t0, t1 = zero, one
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        inv = r0.lc().inverse()
        return r0 * inv, s0 * inv, t0 * inv

    def format(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            cs = str(c)
            if not mono:
                parts.append(f"({cs})")
            elif c.is_one():
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"TPoly({self.format()!r}, nvars={self.nvars})"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


@dataclass(frozen=True)
class PartialFractions:
    polynomial_part: TPoly
    terms: tuple  # ((factor, m, numerator), ...) with deg numerator < deg factor
    irreducibility_asserted: bool = True

    def to_json(self) -> dict:
        return {"polynomial": self.polynomial_part.to_json(),
                "terms": [{"factor": Q.to_json(), "power": m, "numerator": P.to_json()}
                          for Q, m, P in self.terms]}

    def reconstruct_numerator(self, factored_den: Sequence[tuple[TPoly, int]]) -> TPoly:
        """``polynomial_part * D + sum P * D / Q^m`` where ``D`` is the full denominator."""
        D = _denominator(factored_den, self.polynomial_part.nvars)
        out = self.polynomial_part * D
        for Q, m, P in self.terms:
            out = out + P * (D // (Q ** m))
        return out

    def to_ratfunc(self) -> RatFunc:
        out = self.polynomial_part.to_ratfunc()
        for Q, m, P in self.terms:
            out = out + P.to_ratfunc() / (Q.to_ratfunc() ** m)
        return out


def _denominator(factored: Sequence[tuple[TPoly, int]], nvars: int) -> TPoly:
    D = TPoly.constant(1, nvars)
    for Q, m in factored:
        D = D * Q ** m
    return D


def partial_fractions(num: TPoly, factored_den: Sequence[tuple[TPoly, int]]) -> PartialFractions:
    """Decompose ``num / prod Q^m`` into a polynomial part and ``P_{Q,m} / Q^m`` terms."""
    n = num.nvars
    factors = [(Q, int(m)) for Q, m in factored_den]
    for Q, m in factors:
        if Q.nvars != n:
            raise DimensionError("factor over a different coefficient field")
        if m < 1:
            raise DomainError("multiplicities must be positive")
        if Q.degree < 1:
            raise DomainError("factors must have positive degree in t")
        if not Q.is_monic():
            raise DomainError(f"factor {Q.format()} is not monic in t")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if factors[i][0].gcd(factors[j][0]).degree > 0:
                raise DomainError("denominator factors are not coprime")
    D = _denominator(factors, n)
    poly, rem = num.divmod(D)
    terms = []
    for i, (Q, m) in enumerate(factors):
        A = Q ** m
        B = D // A
        g, u, _ = B.xgcd(A)
        if g.degree != 0:
            raise DomainError("denominator factors are not coprime")
        C = (rem * u) % A
        # Q-adic digits of C: C = sum_k c_k Q^k with deg c_k < deg Q
        digits = []
        for _ in range(m):
            C, c = C.divmod(Q)
            digits.append(c)
        for k, c in enumerate(digits):
            if not c.is_zero():
                terms.append((Q, m - k, c))
    terms.sort(key=lambda x: ([str(c) for c in x[0].coeffs], x[1]))
    return PartialFractions(poly, tuple(terms))
