"""Permutation modules ``K<(Psi choose s)>`` at finite level.

Subsets are ordered colexicographically (compare the sorted lists read from
the largest element down).  Everything here is exact; rank certificates
come from :func:`hilbert90.linalg.rank_exact`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial, prod
from typing import Iterable, Sequence

from hilbert90.errors import DimensionError, DomainError, InconsistencyError
from hilbert90.exactfield import (
    FinPermutation,
    MultiPoly,
    RatFunc,
    elementary_symmetric,
    is_fixed_by,
    vandermonde_product,
)
from hilbert90.linalg import Matrix, rank_exact, rank_specialized
from hilbert90.partfrac import PartialFractions, TPoly, partial_fractions  # noqa: F401  (re-export)
from hilbert90.permgroup import sym_generators
from hilbert90.rng import SeededSource


def colex_key(S: Iterable[int]):
    return tuple(sorted(S, reverse=True))


def subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """``k``-subsets of ``{1..n}`` as sorted tuples, in colex order."""
    return sorted(itertools.combinations(range(1, n + 1), k), key=colex_key)


# -- formal sums ------------------------------------------------------------

@dataclass(frozen=True)
class PermModuleExpr:
    kappa: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, k in dict(self.kappa).items():
            s, k = int(s), int(k)
            if s < 0 or k < 0:
                raise DomainError("multiplicities and sizes must be nonnegative")
            if k:
                clean[s] = k
        object.__setattr__(self, "kappa", dict(sorted(clean.items())))

    def dimension(self, n: int) -> int:
        """Rank of the level-``n`` realization: ``sum kappa_s C(n, s)``."""
        return sum(k * comb(n, s) for s, k in self.kappa.items())

    @property
    def level(self) -> int:
        return max(self.kappa, default=0)

    def to_json(self) -> dict:
        return {"kappa": {str(s): k for s, k in self.kappa.items()}}

    @classmethod
    def from_json(cls, data: dict) -> "PermModuleExpr":
        return cls({int(s): int(k) for s, k in data["kappa"].items()})

    def __add__(self, other: "PermModuleExpr") -> "PermModuleExpr":
        out = dict(self.kappa)
        for s, k in other.kappa.items():
            out[s] = out.get(s, 0) + k
        return PermModuleExpr(out)


def multinomial(total: int, parts: Sequence[int]) -> int:
    if sum(parts) != total or min(parts, default=0) < 0:
        return 0
    return factorial(total) // prod(factorial(p) for p in parts)


def product_decompose(a: int, b: int) -> PermModuleExpr:
    """``K<(Psi choose a) x (Psi choose b)>`` as a sum of ``K<(Psi choose s)>``."""
    if a < 0 or b < 0:
        raise DomainError("subset sizes must be nonnegative")
    kappa = {}
    for j in range(min(a, b) + 1):
        s = a + b - j
        kappa[s] = kappa.get(s, 0) + multinomial(s, (j, a - j, b - j))
    return PermModuleExpr(kappa)


def product_dimension_identity(a: int, b: int, n: int) -> bool:
    return comb(n, a) * comb(n, b) == product_decompose(a, b).dimension(n)


def product_orbit_multiplicities(a: int, b: int, n: int) -> PermModuleExpr:
    """Orbit-enumeration oracle for :func:`product_decompose` at level ``n``.

    Enumerates the ``S_n``-orbits on pairs ``(A, B)`` by search along adjacent
    transpositions; an orbit with isotropy ``Sym(A∩B) x Sym(A\\B) x ...``
    contributes ``|orbit| / C(n, |A ∪ B|)`` copies of ``K<(Psi choose |A ∪ B|)>``.
    """
    if n < a + b:
        raise DomainError("orbit oracle needs n >= a + b")
    pairs = [(frozenset(A), frozenset(B)) for A in itertools.combinations(range(1, n + 1), a)
             for B in itertools.combinations(range(1, n + 1), b)]
    swaps = [FinPermutation.transposition(i, i + 1, n) for i in range(1, n)]
    seen: set = set()
    kappa: dict[int, int] = {}
    for p in pairs:
        if p in seen:
            continue
        orbit = {p}
        stack = [p]
        while stack:
            A, B = stack.pop()
            for s in swaps:
                q = (s.apply_to_set(A), s.apply_to_set(B))
                if q not in orbit:
                    orbit.add(q)
                    stack.append(q)
        seen |= orbit
        size = len(p[0] | p[1])
        mult, rem = divmod(len(orbit), comb(n, size))
        if rem:
            raise InconsistencyError("orbit size is not a multiple of the subset count")
        kappa[size] = kappa.get(size, 0) + mult
    return PermModuleExpr(kappa)


# -- finite-index split -------------------------------------------------------

def artin_basis(T: Iterable[int], n: int) -> list[RatFunc]:
    """Monomials ``prod x_{t_i}^{e_i}`` with ``e_i <= k - i`` on sorted ``T`` (a basis of ``K^U`` over ``K^H``)."""
    Ts = sorted(T)
    k = len(Ts)
    out = []
    for exps in itertools.product(*[range(k - i) for i in range(k)]):
        e = [0] * n
        for t, x in zip(Ts, exps):
            e[t - 1] = x
        out.append(RatFunc.from_poly(MultiPoly.monomial(e)))
    return out


@dataclass(frozen=True)
class SplitResult:
    matrix: Matrix
    det: RatFunc
    orderings: tuple

    @property
    def is_basis(self) -> bool:
        return not self.det.is_zero()

    @property
    def report(self) -> str:
        return "isomorphism" if self.is_basis else "not a basis"


def split_matrix(T: Iterable[int], basis: Sequence[RatFunc] | None = None, n: int | None = None) -> SplitResult:
    """The matrix ``[xi_i(f_j)]`` over orderings ``xi`` of ``T`` and its determinant."""
    Ts = sorted(set(T))
    if n is None:
        n = max(Ts, default=0)
    if Ts and (Ts[0] < 1 or Ts[-1] > n):
        raise DimensionError("T is not inside 1..n")
    if basis is None:
        basis = artin_basis(Ts, n)
    basis = [b if isinstance(b, RatFunc) else RatFunc.parse(str(b), n) for b in basis]
    k = len(Ts)
    if len(basis) != factorial(k):
        raise DomainError(f"need |T|! = {factorial(k)} basis elements, got {len(basis)}")
    comp_gens = [FinPermutation(g) for g in sym_generators([i for i in range(1, n + 1) if i not in Ts], n)]
    for f in basis:
        if f.nvars != n:
            raise DimensionError("basis element at the wrong level")
        if not is_fixed_by(f, comp_gens):
            raise DomainError(f"basis element {f} is not fixed by the pointwise stabilizer of T")
    orderings = []
    for perm in itertools.permutations(Ts):
        im = list(range(1, n + 1))
        for a, b in zip(Ts, perm):
            im[a - 1] = b
        orderings.append(FinPermutation(im))
    rows = [[f.permute_variables(xi.images) for f in basis] for xi in orderings]
    M = Matrix._raw(rows, n, len(basis))
    return SplitResult(M, M.det(), tuple(orderings))


# -- tensor powers ------------------------------------------------------------

def binomial_basis_coeffs(N: int) -> list[int]:
    """``a_{0..N}`` with ``t^N = sum a_i C(t, i)``, solved as a unitriangular system."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    a: list[int] = []
    for m in range(N + 1):
        a.append(m ** N - sum(a[i] * comb(m, i) for i in range(m)))
    return a


def surjection_count(N: int, i: int) -> int:
    """Brute-force count of surjections ``{1..N} -> {1..i}``."""
    target = set(range(i))
    return sum(1 for f in itertools.product(range(i), repeat=N) if set(f) == target) if N else int(i == 0)


def set_partition_count(N: int, i: int) -> int:
    """Brute-force Stirling number of the second kind via restricted growth strings."""
    if N == 0:
        return int(i == 0)
    count = 0
    for rgs in itertools.product(range(N), repeat=N):
        if rgs[0] != 0:
            continue
        ok = True
        top = 0
        for x in rgs[1:]:
            if x > top + 1:
                ok = False
                break
            top = max(top, x)
        if ok and top + 1 == i:
            count += 1
    return count


@dataclass(frozen=True)
class AlphaMap:
    N: int
    n: int
    matrix: Matrix
    domain: tuple
    codomain: tuple

    def rank(self) -> int:
        return rank_exact(self.matrix)

    def is_bijective(self) -> bool:
        return self.matrix.is_square() and self.rank() == self.matrix.nrows


def alpha_domain_codomain(N: int, n: int) -> tuple[list, list]:
    SN = subsets(n, N)
    SN1 = subsets(n, N + 1)
    dom = [("S", S, s) for s in range(N) for S in SN] + [("T", T, s) for s in range(N + 1) for T in SN1]
    cod = [(S, t) for S in SN for t in range(1, n + 1)]
    return dom, cod


def alpha_map_matrix(N: int, n: int) -> AlphaMap:
    """Matrix of ``alpha`` with rows indexed by ``[S, t]`` and columns by ``[S]_s``, ``[T]_s``."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    if n < N + 1:
        raise DomainError(f"need n >= N + 1 = {N + 1}")
    dom, cod = alpha_domain_codomain(N, n)
    if len(dom) != len(cod) or N * comb(n, N) + (N + 1) * comb(n, N + 1) != comb(n, N) * n:
        raise InconsistencyError("domain and codomain dimensions differ")
    row_of = {c: i for i, c in enumerate(cod)}
    zero = RatFunc.zero(n)
    rows = [[zero] * len(dom) for _ in cod]
    for j, (kind, X, s) in enumerate(dom):
        for t in X:
            rest = [u for u in X if u != t]
            val = RatFunc.from_poly(elementary_symmetric(s, rest, n))
            key = (X, t) if kind == "S" else (tuple(rest), t)
            rows[row_of[key]][j] = val
    return AlphaMap(N, n, Matrix._raw(rows, n, len(dom)), tuple(dom), tuple(cod))


def alpha_equivariant(am: AlphaMap) -> bool:
    """``sigma(A[c, d]) = A[sigma c, sigma d]`` for every adjacent transposition."""
    n = am.n
    col_of = {d: j for j, d in enumerate(am.domain)}
    row_of = {c: i for i, c in enumerate(am.codomain)}
    for i in range(1, n):
        s = FinPermutation.transposition(i, i + 1, n)
        for r, (S, t) in enumerate(am.codomain):
            r2 = row_of[(tuple(sorted(s.apply_to_set(S))), s(t))]
            for c, (kind, X, deg) in enumerate(am.domain):
                c2 = col_of[(kind, tuple(sorted(s.apply_to_set(X))), deg)]
                if am.matrix[r, c].permute_variables(s.images) != am.matrix[r2, c2]:
                    return False
    return True


def tensor_power_report(N: int, n: int, seed: int = 0) -> dict:
    """Coefficients ``a_i`` plus a rank certificate for every induction step ``alpha_k``, ``k < N``."""
    a = binomial_basis_coeffs(N)
    steps = []
    src = SeededSource(seed)
    for k in range(N):
        if n < k + 1:
            continue
        am = alpha_map_matrix(k, n)
        exact = am.rank()
        steps.append({"index": k, "size": am.matrix.nrows,
                      "rank_specialized": rank_specialized(am.matrix, src),
                      "rank_exact": exact, "bijective": exact == am.matrix.nrows})
    return {"N": N, "level": n, "a": a,
            "decomposition": PermModuleExpr({i: x for i, x in enumerate(a)}).to_json(),
            "alpha": steps}


# -- differential forms -------------------------------------------------------

def omega_iso_check(N: int, n: int) -> bool:
    """``[S] -> V(S) dx_S`` intertwines the permutation action with the action on ``N``-forms."""
    if N > n:
        raise DomainError("need N <= n")
    for i in range(1, n):
        s = FinPermutation.transposition(i, i + 1, n)
        for S in subsets(n, N):
            image = [s(t) for t in S]
            # sign of sorting the permuted wedge factors
            sign = FinPermutation([sorted(image).index(x) + 1 for x in image]).sign() if N else 1
            lhs = vandermonde_product(sorted(image), n)
            rhs = vandermonde_product(S, n).permute_variables(s.images)
            if lhs != rhs.scale(sign):
                return False
    return True


# -- Hom orbits ---------------------------------------------------------------

def hom_orbit_count(s: int, t: int, n: int) -> int:
    """Orbits of the setwise stabilizer of an ``s``-set on ``t``-sets (possible intersection sizes)."""
    if min(s, t) < 0 or s > n or t > n:
        raise DomainError("need 0 <= s, t <= n")
    return min(s, t) - max(0, s + t - n) + 1


def hom_orbit_count_bruteforce(s: int, t: int, n: int) -> int:
    gens = sym_generators(range(1, s + 1), n) + sym_generators(range(s + 1, n + 1), n)
    perms = [FinPermutation(g) for g in gens]
    todo = {frozenset(c) for c in itertools.combinations(range(1, n + 1), t)}
    orbits = 0
    while todo:
        start = todo.pop()
        orbits += 1
        stack = [start]
        while stack:
            X = stack.pop()
            for g in perms:
                Y = g.apply_to_set(X)
                if Y in todo:
                    todo.discard(Y)
                    stack.append(Y)
    return orbits
