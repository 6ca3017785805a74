"""Sparse multivariate polynomials over the rationals.

A polynomial at level ``n`` lives in ``Q[x_1, ..., x_n]`` and is stored as a
dict from exponent tuples of length ``n`` to nonzero coefficients (``int``
when integral, otherwise ``Fraction``).  Monomials are compared in graded
lexicographic order: total degree first, then the exponent tuple.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from numbers import Rational
from operator import add
from typing import Iterable, Mapping, Sequence

from hilbert90.errors import DimensionError, DomainError
from hilbert90.exactfield import gcd as _gcd

def norm_coeff(c):
    """Return ``c`` as an exact rational, demoted to ``int`` when integral."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        f = Fraction(c.numerator, c.denominator)
        return f.numerator if f.denominator == 1 else f
    raise DomainError(f"not an exact rational: {c!r}")


def grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, nvars: int = 0):
        if nvars < 0:
            raise DimensionError("negative number of variables")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise DimensionError(f"exponent {e} does not have length {nvars}")
            if min(e, default=0) < 0:
                raise DomainError("negative exponent")
            c = norm_coeff(c)
            if c:
                clean[e] = norm_coeff(clean.get(e, 0) + c)
                if not clean[e]:
                    del clean[e]
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, terms: dict, nvars: int) -> "MultiPoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._make({}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls._make({(0,) * nvars: 1}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        c = norm_coeff(c)
        return cls._make({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPoly":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise DimensionError(f"x{i} is not a variable at level {nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls._make({tuple(e): 1}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "MultiPoly":
        return cls({tuple(exps): coeff}, len(exps))

    @classmethod
    def gens(cls, nvars: int) -> list["MultiPoly"]:
        return [cls.variable(i, nvars) for i in range(1, nvars + 1)]

    # -- predicates and accessors ------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i - 1] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        """1-based indices of the variables that occur."""
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(i + 1)
        return out

    def leading_exponent(self) -> tuple[int, ...]:
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_exponent()] if self.terms else 0

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in decreasing grlex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"level mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._make({e: -c for e, c in self.terms.items()}, self.nvars)

    def __pos__(self) -> "MultiPoly":
        return self

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        r = dict(a)
        for e, c in b.items():
            v = r.get(e, 0) + c
            if v:
                r[e] = norm_coeff(v) if isinstance(v, Fraction) else v
            else:
                del r[e]
        return MultiPoly._make(r, self.nvars)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        r = dict(self.terms)
        for e, c in other.terms.items():
            v = r.get(e, 0) - c
            if v:
                r[e] = norm_coeff(v) if isinstance(v, Fraction) else v
            else:
                del r[e]
        return MultiPoly._make(r, self.nvars)

    def __rsub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "MultiPoly":
        c = norm_coeff(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        if c == 1:
            return self
        if isinstance(c, int):
            r = {e: v * c for e, v in self.terms.items()}
            if any(type(v) is Fraction for v in r.values()):
                r = {e: norm_coeff(v) for e, v in r.items()}
            return MultiPoly._make(r, self.nvars)
        return MultiPoly._make({e: norm_coeff(v * c) for e, v in self.terms.items()}, self.nvars)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, Rational)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly.zero(self.nvars)
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return self.scale(cb) if b is other.terms else other.scale(cb)
            r = {tuple(map(add, ea, eb)): ca * cb for ea, ca in a.items()}
            if isinstance(cb, Fraction) or any(isinstance(v, Fraction) for v in a.values()):
                r = {e: norm_coeff(v) for e, v in r.items()}
            return MultiPoly._make(r, self.nvars)
        r: dict = {}
        get = r.get
        frac = False
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                v = get(e, 0) + ca * cb
                if v:
                    r[e] = v
                else:
                    del r[e]
        for v in r.values():
            if isinstance(v, Fraction):
                frac = True
                break
        if frac:
            r = {e: norm_coeff(v) for e, v in r.items()}
        return MultiPoly._make(r, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise DomainError("polynomial powers need a nonnegative integer exponent")
        result = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- integer structure --------------------------------------------------

    def denominator_lcm(self) -> int:
        d = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                d = lcm(d, c.denominator)
        return d

    def to_int_dict(self) -> tuple[int, dict]:
        """``(d, P)`` with ``self = P / d`` and ``P`` an integer dict."""
        d = self.denominator_lcm()
        if d == 1:
            return 1, dict(self.terms)
        return d, {e: int(c * d) for e, c in self.terms.items()}

    def content(self) -> Fraction:
        """Rational content, signed so that the primitive part has positive grlex leading coefficient."""
        if not self.terms:
            return Fraction(0)
        d, P = self.to_int_dict()
        c = Fraction(reduce(gcd, P.values(), 0), d)
        if self.leading_coeff() < 0:
            c = -c
        return c

    def primitive(self) -> tuple[Fraction, "MultiPoly"]:
        c = self.content()
        if not c:
            return c, self
        return c, self.scale(1 / c)

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(Fraction(1) / self.leading_coeff())

    # -- division and gcd ---------------------------------------------------

    def divides(self, other: "MultiPoly") -> "MultiPoly | None":
        """``other / self`` if it is a polynomial, else ``None``."""
        self._check(other)
        if not self.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not other.terms:
            return MultiPoly.zero(self.nvars)
        if len(self.terms) == 1:
            (e0, c0), = self.terms.items()
            out = {}
            for e, c in other.terms.items():
                k = tuple(a - b for a, b in zip(e, e0))
                if min(k, default=0) < 0:
                    return None
                if isinstance(c, int) and isinstance(c0, int) and not c % c0:
                    out[k] = c // c0
                else:
                    out[k] = norm_coeff(Fraction(c) / c0)
            return MultiPoly._make(out, self.nvars)
        da, A = other.to_int_dict()
        db, B = self.to_int_dict()
        cb = _gcd.content(B)
        B = {e: v // cb for e, v in B.items()}
        ca = _gcd.content(A)
        A = {e: v // ca for e, v in A.items()}
        q = _gcd.divexact(A, B)
        if q is None:
            return None
        return MultiPoly._make(q, self.nvars).scale(Fraction(ca * db, da * cb))

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        q = other.divides(self)
        if q is None:
            raise DomainError("polynomial division is not exact")
        return q

    def __floordiv__(self, other):
        if isinstance(other, MultiPoly):
            return self.exact_div(other)
        return self.scale(Fraction(1) / norm_coeff(other))

    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        """GCD normalized to be primitive over Z with positive grlex leading coefficient."""
        self._check(other)
        if not self.terms and not other.terms:
            return MultiPoly.zero(self.nvars)
        if not self.terms:
            return other.primitive()[1]
        if not other.terms:
            return self.primitive()[1]
        if self.is_constant() or other.is_constant():
            return MultiPoly.one(self.nvars)
        _, A = self.to_int_dict()
        _, B = other.to_int_dict()
        g = MultiPoly._make(_gcd.int_gcd(A, B, self.nvars), self.nvars)
        return g.primitive()[1]

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionError("evaluation point has the wrong length")
        pt = [norm_coeff(v) for v in point]
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(pt, e):
                if k:
                    t *= v ** k
            total += t
        return norm_coeff(total)

    def specialize(self, values: Mapping[int, object]) -> "MultiPoly":
        """Set ``x_i = values[i]`` for the given 1-based indices; the level is unchanged."""
        vals = {i - 1: norm_coeff(v) for i, v in values.items()}
        for i in vals:
            if not 0 <= i < self.nvars:
                raise DimensionError(f"x{i + 1} is not a variable at level {self.nvars}")
        r: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            t = c
            for i, v in vals.items():
                if e[i]:
                    t = t * v ** e[i]
                    e2[i] = 0
            if t:
                k = tuple(e2)
                s = r.get(k, 0) + t
                if s:
                    r[k] = s
                else:
                    del r[k]
        return MultiPoly._make({e: norm_coeff(c) for e, c in r.items()}, self.nvars)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace ``x_i`` by ``images[i-1]``; the result lives at the images' level."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        if not images:
            return MultiPoly.constant(self.constant_term(), 0)
        m = images[0].nvars
        for g in images:
            if g.nvars != m:
                raise DimensionError("images live at different levels")
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            key = (i, k)
            p = cache.get(key)
            if p is None:
                p = images[i] if k == 1 else power(i, k - 1) * images[i]
                cache[key] = p
            return p

        result = MultiPoly.zero(m)
        for e, c in self.terms.items():
            t = MultiPoly.constant(c, m)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def permute_variables(self, images: Sequence[int]) -> "MultiPoly":
        """Substitute ``x_i -> x_{images[i-1]}`` for a permutation given by 1-based images."""
        n = self.nvars
        if len(images) != n:
            raise DimensionError("permutation length does not match the level")
        r = {}
        for e, c in self.terms.items():
            e2 = [0] * n
            for i, k in enumerate(e):
                e2[images[i] - 1] = k
            r[tuple(e2)] = c
        return MultiPoly._make(r, n)

    def lift(self, m: int) -> "MultiPoly":
        """Embed into ``Q[x_1..x_m]`` for ``m >= nvars``."""
        if m < self.nvars:
            if m < self.nvars and any(e[m:] != (0,) * (self.nvars - m) for e in self.terms):
                raise DimensionError(f"polynomial uses variables beyond x{m}")
            return MultiPoly._make({e[:m]: c for e, c in self.terms.items()}, m)
        pad = (0,) * (m - self.nvars)
        return MultiPoly._make({e + pad: c for e, c in self.terms.items()}, m)

    def derivative(self, i: int) -> "MultiPoly":
        j = i - 1
        r = {}
        for e, c in self.terms.items():
            if e[j]:
                e2 = list(e)
                e2[j] -= 1
                r[tuple(e2)] = c * e[j]
        return MultiPoly._make(r, self.nvars)

    def homogeneous_components(self) -> dict[int, "MultiPoly"]:
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {d: MultiPoly._make(t, self.nvars) for d, t in out.items()}

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._make({e: c for e, c in self.terms.items() if sum(e) == d}, self.nvars)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficients_in(self, i: int) -> dict[int, "MultiPoly"]:
        """Split as a polynomial in ``x_i``: ``{k: coefficient of x_i^k}`` (coefficients keep the level)."""
        j = i - 1
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[j]
            e2[j] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        return {k: MultiPoly._make(t, self.nvars) for k, t in out.items()}

    # -- display ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"MultiPoly({self.format()!r}, nvars={self.nvars})"

    def __str__(self) -> str:
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        from hilbert90.exactfield.grammar import format_poly
        return format_poly(self, names)


def poly_from_terms(items: Iterable[tuple[Sequence[int], object]], nvars: int) -> MultiPoly:
    return MultiPoly({tuple(e): c for e, c in items}, nvars)
