"""Exact matrices over ``Q(x_1..x_n)`` and over ``Q``.

``Matrix`` is the oracle matrix type: rectangular, entries normalized
``RatFunc`` values, all at one level.  Rank is computed by sparse
fraction-free elimination (``rank_exact``) or, as a cheap lower bound, after
a seeded rational specialization (``rank_specialized``).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Sequence

from hilbert90.errors import DimensionError, DomainError, ResourceError
from hilbert90.exactfield import FinPermutation, MultiPoly, RatFunc, as_ratfunc

SPECIALIZE_RETRIES = 16


class Matrix:
    __slots__ = ("rows", "nrows", "ncols", "nvars")

    def __init__(self, rows: Sequence[Sequence[object]], nvars: int, ncols: int | None = None):
        rows = [tuple(as_ratfunc(x, nvars) for x in r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("ragged matrix")
        self.rows = tuple(rows)
        self.nrows = len(rows)
        self.ncols = ncols
        self.nvars = nvars

    @classmethod
    def _raw(cls, rows, nvars: int, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = ncols
        m.nvars = nvars
        return m

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, k: int, nvars: int) -> "Matrix":
        one, zero = RatFunc.one(nvars), RatFunc.zero(nvars)
        return cls._raw([[one if i == j else zero for j in range(k)] for i in range(k)], nvars, k)

    @classmethod
    def zeros(cls, r: int, c: int, nvars: int) -> "Matrix":
        zero = RatFunc.zero(nvars)
        return cls._raw([[zero] * c for _ in range(r)], nvars, c)

    @classmethod
    def diag(cls, entries: Sequence[object], nvars: int) -> "Matrix":
        k = len(entries)
        zero = RatFunc.zero(nvars)
        d = [as_ratfunc(e, nvars) for e in entries]
        return cls._raw([[d[i] if i == j else zero for j in range(k)] for i in range(k)], nvars, k)

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], nvars: int) -> "Matrix":
        return cls([[RatFunc.parse(s, nvars) for s in r] for r in rows], nvars)

    @classmethod
    def from_rational(cls, rows: Sequence[Sequence[object]], nvars: int) -> "Matrix":
        return cls._raw([[RatFunc.constant(x, nvars) for x in r] for r in rows], nvars,
                        len(rows[0]) if rows else 0)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    # -- basic structure ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> RatFunc:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.nvars == other.nvars and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.nvars, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.to_strings()!r}, nvars={self.nvars})"

    def is_identity(self) -> bool:
        if not self.is_square():
            return False
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if i == j:
                    if not x.is_one():
                        return False
                elif x:
                    return False
        return True

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def map(self, fn: Callable[[RatFunc], RatFunc], nvars: int | None = None) -> "Matrix":
        return Matrix._raw([[fn(x) for x in r] for r in self.rows],
                           self.nvars if nvars is None else nvars, self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix._raw(list(zip(*self.rows)) if self.rows else [], self.nvars, self.nrows)

    def _check_level(self, other: "Matrix") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"level mismatch: {self.nvars} vs {other.nvars}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_level(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in matrix sum")
        return Matrix._raw([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                           self.nvars, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_level(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in matrix difference")
        return Matrix._raw([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                           self.nvars, self.ncols)

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def scale(self, c) -> "Matrix":
        c = as_ratfunc(c, self.nvars)
        return self.map(lambda x: x * c)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return self.scale(other)
        self._check_level(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        zero = RatFunc.zero(self.nvars)
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in cols:
                s = zero
                for k, a in nz:
                    b = c[k]
                    if b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix._raw(out, self.nvars, other.ncols)

    def apply_vector(self, v: Sequence[RatFunc]) -> list[RatFunc]:
        if len(v) != self.ncols:
            raise DimensionError("vector length does not match")
        zero = RatFunc.zero(self.nvars)
        out = []
        for r in self.rows:
            s = zero
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return out

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.nrows, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- action and level change --------------------------------------------

    def act(self, p: FinPermutation) -> "Matrix":
        """Entrywise variable permutation ``sigma(M)``."""
        if p.n != self.nvars:
            raise DimensionError(f"permutation at level {p.n} acting on level {self.nvars}")
        if p.is_identity():
            return self
        im = p.images
        return self.map(lambda x: x.permute_variables(im))

    def lift(self, m: int) -> "Matrix":
        return self.map(lambda x: x.lift(m), nvars=m)

    def specialize(self, values) -> "Matrix":
        return self.map(lambda x: x.specialize(values))

    def substitute(self, images: Sequence[RatFunc]) -> "Matrix":
        m = images[0].nvars if images else 0
        return self.map(lambda x: x.substitute(images), nvars=m)

    def evaluate(self, point: Sequence) -> list[list[Fraction]]:
        return [[Fraction(x.evaluate(point)) for x in r] for r in self.rows]

    def derivative(self, i: int) -> "Matrix":
        return self.map(lambda x: x.derivative(i))

    # -- block constructions -------------------------------------------------

    def kron(self, other: "Matrix") -> "Matrix":
        self._check_level(other)
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([a * b for a in r for b in s])
        return Matrix._raw(out, self.nvars, self.ncols * other.ncols)

    def block_diag(self, other: "Matrix") -> "Matrix":
        self._check_level(other)
        zero = RatFunc.zero(self.nvars)
        out = [list(r) + [zero] * other.ncols for r in self.rows]
        out += [[zero] * self.ncols + list(r) for r in other.rows]
        return Matrix._raw(out, self.nvars, self.ncols + other.ncols)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        cols = list(cols)
        return Matrix._raw([[self.rows[i][j] for j in cols] for i in rows], self.nvars, len(cols))

    # -- determinant, inverse, rank ------------------------------------------

    def det(self) -> RatFunc:
        """Determinant by Bareiss elimination on the denominator-cleared matrix."""
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return RatFunc.one(self.nvars)
        scale = RatFunc.one(self.nvars)
        A: list[list[MultiPoly]] = []
        for r in self.rows:
            d = _row_den_lcm(r, self.nvars)
            scale = scale * RatFunc.from_poly(d)
            A.append([(x.num * d.exact_div(x.den)) if x else MultiPoly.zero(self.nvars) for x in r])
        sign = 1
        prev = MultiPoly.one(self.nvars)
        for k in range(n - 1):
            if not A[k][k]:
                for i in range(k + 1, n):
                    if A[i][k]:
                        A[k], A[i] = A[i], A[k]
                        sign = -sign
                        break
                else:
                    return RatFunc.zero(self.nvars)
            akk = A[k][k]
            for i in range(k + 1, n):
                aik = A[i][k]
                for j in range(k + 1, n):
                    v = akk * A[i][j] - aik * A[k][j]
                    A[i][j] = v if prev.is_constant() and prev.constant_term() == 1 else v.exact_div(prev)
                A[i][k] = MultiPoly.zero(self.nvars)
            prev = akk
        d = RatFunc.from_poly(A[n - 1][n - 1])
        if sign < 0:
            d = -d
        return d / scale

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse over the rational function field."""
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        one, zero = RatFunc.one(self.nvars), RatFunc.zero(self.nvars)
        A = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = _choose_pivot(A, c, range(c, n))
            if piv is None:
                raise DomainError("matrix is singular")
            A[c], A[piv] = A[piv], A[c]
            p = A[c][c]
            if not p.is_one():
                inv = p.inverse()
                A[c] = [x * inv if x else x for x in A[c]]
            for i in range(n):
                if i != c and A[i][c]:
                    f = A[i][c]
                    A[i] = [a - f * b if b else a for a, b in zip(A[i], A[c])]
        return Matrix._raw([r[n:] for r in A], self.nvars, n)

    def is_invertible(self) -> bool:
        if not self.is_square():
            return False
        return self.rank_exact() == self.nrows

    def rank_exact(self) -> int:
        return rank_exact(self)

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form over the field and its pivot columns."""
        A = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            piv = None
            for i in range(r, self.nrows):
                if A[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            A[r], A[piv] = A[piv], A[r]
            inv = A[r][c].inverse()
            A[r] = [x * inv if x else x for x in A[r]]
            for i in range(self.nrows):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [a - f * b if b else a for a, b in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix._raw(A, self.nvars, self.ncols), pivots

    def kernel(self) -> list[list[RatFunc]]:
        """Basis of the right kernel, one vector per free column (free entry 1)."""
        R, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        zero, one = RatFunc.zero(self.nvars), RatFunc.one(self.nvars)
        basis = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = one
            for i, pc in enumerate(pivots):
                v[pc] = -R.rows[i][f]
            basis.append(v)
        return basis


def _choose_pivot(A, c: int, rows: Iterable[int]) -> int | None:
    # prefer constant pivots, then the shortest entry; ties by row order
    best, best_key = None, None
    for i in rows:
        x = A[i][c]
        if not x:
            continue
        key = (0 if x.is_constant() else 1, len(x.num.terms) + len(x.den.terms))
        if best is None or key < best_key:
            best, best_key = i, key
            if key[0] == 0:
                break
    return best


def _row_den_lcm(row: Sequence[RatFunc], nvars: int) -> MultiPoly:
    d = MultiPoly.one(nvars)
    for x in row:
        if x and not x.den.is_constant():
            if d.is_constant():
                d = x.den
            else:
                g = d.gcd(x.den)
                d = d * x.den.exact_div(g)
    return d


def _poly_row(row: Sequence[RatFunc], nvars: int) -> dict[int, MultiPoly]:
    d = _row_den_lcm(row, nvars)
    out = {}
    for j, x in enumerate(row):
        if x:
            out[j] = x.num * d.exact_div(x.den) if not x.den.is_constant() else x.num * d
    return _primitive_row(out)


def _primitive_row(row: dict[int, MultiPoly]) -> dict[int, MultiPoly]:
    """Divide a polynomial row by the gcd of its entries, including the rational content."""
    if not row:
        return row
    g = None
    for p in row.values():
        g = p.primitive()[1] if g is None else g.gcd(p)
        if g.is_constant():
            break
    if not g.is_constant():
        row = {j: p.exact_div(g) for j, p in row.items()}
    num, den = 0, 1
    for p in row.values():
        c = abs(p.content())
        num = gcd(num, c.numerator)
        den = lcm(den, c.denominator)
    c = Fraction(num, den)
    if c != 1:
        row = {j: p.scale(1 / c) for j, p in row.items()}
    return row


def rank_exact(m: Matrix) -> int:
    """Exact rank by sparse fraction-free elimination with row-content removal.

    Columns are scanned left to right; the pivot is the first remaining row
    (in row order) with a nonzero entry.  Only rows meeting the pivot column
    are touched, so block structure is preserved.
    """
    rows = [_poly_row(r, m.nvars) for r in m.rows]
    rows = [r for r in rows if r]
    rank = 0
    active = list(range(len(rows)))
    for c in range(m.ncols):
        piv = None
        for idx in active:
            if c in rows[idx]:
                piv = idx
                break
        if piv is None:
            continue
        active.remove(piv)
        prow = rows[piv]
        p = prow[c]
        for idx in active:
            r = rows[idx]
            a = r.get(c)
            if a is None:
                continue
            new = {}
            keys = set(r) | set(prow)
            for j in keys:
                if j == c:
                    continue
                v = r.get(j)
                w = prow.get(j)
                val = (v * p if v is not None else MultiPoly.zero(m.nvars))
                if w is not None:
                    val = val - a * w
                if val:
                    new[j] = val
            rows[idx] = _primitive_row(new)
        active = [i for i in active if rows[i]]
        rank += 1
    return rank


def random_point(nvars: int, src) -> list[Fraction]:
    return [src.rational() for _ in range(nvars)]


def rank_specialized(m: Matrix, src) -> int:
    """Rank after a seeded rational specialization; never exceeds ``rank_exact``."""
    for _ in range(SPECIALIZE_RETRIES):
        pt = random_point(m.nvars, src)
        try:
            vals = [[x.evaluate(pt) if x else 0 for x in r] for r in m.rows]
        except DomainError:
            continue
        return qrank(vals)
    raise ResourceError(f"{SPECIALIZE_RETRIES} consecutive specializations hit a pole")


# -- matrices over Q (lists of lists of Fraction) ----------------------------

def qmat(rows: Sequence[Sequence[object]]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def qidentity(k: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]


def qzeros(r: int, c: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * c for _ in range(r)]


def qmul(A, B) -> list[list[Fraction]]:
    if A and len(A[0]) != len(B):
        raise DimensionError("shape mismatch")
    cols = list(zip(*B)) if B else []
    return [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols] for r in A]


def qadd(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def qscale(A, c):
    return [[a * c for a in r] for r in A]


def qpow(A, k: int):
    out = qidentity(len(A))
    for _ in range(k):
        out = qmul(out, A)
    return out


def qrref(A) -> tuple[list[list[Fraction]], list[int]]:
    A = [list(map(Fraction, r)) for r in A]
    nr = len(A)
    nc = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nr):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return A, pivots


def qrank(A) -> int:
    if not A or not A[0]:
        return 0
    return len(qrref(A)[1])


def qinverse(A):
    n = len(A)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    R, piv = qrref(aug)
    if piv[:n] != list(range(n)):
        raise DomainError("rational matrix is singular")
    return [r[n:] for r in R]


def qkernel(A) -> list[list[Fraction]]:
    nc = len(A[0]) if A else 0
    R, pivots = qrref(A)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis
