"""Modules over the difference subfield ``K = Q(x_i - x_j)`` and their Jordan type.

A module whose cocycle entries are invariant under the simultaneous shift
``x_i -> x_i + lam`` is trivialized over ``Q(x_1..x_n)`` by some ``Phi``;
``X(lam) = Phi^{-1} Phi(x + lam)`` is then a one-parameter subgroup
``exp(lam nu)`` of ``GL_N(Q)`` and the Jordan block sizes of the nilpotent
``nu`` classify the module.

At a finite level the averaged witness from :func:`speiser_trivialize` is
only ``S_n``-symmetric, so ``X`` may still depend on ``x``.  Extraction
therefore uses :func:`anchored_witness`, which builds ``Phi`` from the
variables the cocycle actually moves and keeps one variable fresh.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from hilbert90.errors import DomainError, InconsistencyError, ResourceError
from hilbert90.exactfield import MultiPoly, RatFunc
from hilbert90.linalg import Matrix, qidentity, qinverse, qkernel, qmul, qrank, qzeros
from hilbert90.rng import SeededSource
from hilbert90.semilin import (
    CocycleModule,
    conjugate_module,
    relation_failures,
    speiser_trivialize,
    swap,
    witness_holds,
)

POINT_RETRIES = 16


# -- shift invariance ----------------------------------------------------------

def shift(f: RatFunc) -> RatFunc:
    """``f(x_1 + lam, ..., x_n + lam)`` at level ``n+1`` with ``lam = x_{n+1}``."""
    n = f.nvars
    lam = RatFunc.variable(n + 1, n + 1)
    return f.substitute([RatFunc.variable(i, n + 1) + lam for i in range(1, n + 1)])


def shift_matrix(M: Matrix) -> Matrix:
    n = M.nvars
    lam = RatFunc.variable(n + 1, n + 1)
    return M.substitute([RatFunc.variable(i, n + 1) + lam for i in range(1, n + 1)])


def is_shift_invariant(f: RatFunc) -> bool:
    return shift(f) == f.lift(f.nvars + 1)


def matrix_shift_invariant(M: Matrix) -> bool:
    return all(is_shift_invariant(x) for r in M.rows for x in r)


class DifferenceModule:
    """A :class:`CocycleModule` whose generator entries lie in the difference subfield."""

    __slots__ = ("underlying",)

    def __init__(self, underlying: CocycleModule, check: bool = True):
        if check:
            for i, g in enumerate(underlying.gens, 1):
                if not matrix_shift_invariant(g):
                    raise DomainError(f"f_{i} has entries outside the difference subfield")
            bad = relation_failures(underlying)
            if bad:
                raise DomainError(f"not a cocycle: {', '.join(bad)} fail")
        self.underlying = underlying

    @property
    def level(self) -> int:
        return self.underlying.level

    @property
    def rank(self) -> int:
        return self.underlying.rank

    def f(self, i: int) -> Matrix:
        return self.underlying.f(i)

    def to_json(self) -> dict:
        return self.underlying.to_json()

    @classmethod
    def from_json(cls, data: dict) -> "DifferenceModule":
        return cls(CocycleModule.from_json(data))

    def __eq__(self, other) -> bool:
        return isinstance(other, DifferenceModule) and self.underlying == other.underlying

    def __hash__(self) -> int:
        return hash(self.underlying)

    def __repr__(self) -> str:
        return f"DifferenceModule(level={self.level}, rank={self.rank})"


def as_difference_module(m) -> DifferenceModule:
    return m if isinstance(m, DifferenceModule) else DifferenceModule(m)


# -- standard indecomposables ----------------------------------------------------

def pascal(a: RatFunc, N: int) -> Matrix:
    """Upper triangular ``[C(j, i) a^(j-i)]``; ``pascal(a) pascal(b) = pascal(a + b)``."""
    n = a.nvars
    zero = RatFunc.zero(n)
    powers = [RatFunc.one(n)]
    for _ in range(N):
        powers.append(powers[-1] * a)
    rows = [[powers[j - i] * comb(j, i) if j >= i else zero for j in range(N)] for i in range(N)]
    return Matrix._raw(rows, n, N)


def standard_indecomposable(N: int, n: int) -> DifferenceModule:
    """Rank ``N`` on the basis ``1, x_1, ..., x_1^(N-1)``; only ``s_1`` acts nontrivially."""
    if N < 1:
        raise DomainError("rank must be positive")
    if n < 2:
        raise DomainError("level must be at least 2")
    d = RatFunc.variable(2, n) - RatFunc.variable(1, n)
    gens = [pascal(d, N)] + [Matrix.identity(N, n)] * (n - 2)
    return DifferenceModule(CocycleModule(n, N, gens), check=False)


def standard_sum(sizes: Sequence[int], n: int) -> DifferenceModule:
    """Direct sum of standard indecomposables, blocks in the given order."""
    sizes = list(sizes)
    if not sizes:
        raise DomainError("need at least one block")
    gens = None
    for N in sizes:
        blk = standard_indecomposable(N, n).underlying.gens
        gens = list(blk) if gens is None else [a.block_diag(b) for a, b in zip(gens, blk)]
    return DifferenceModule(CocycleModule(n, sum(sizes), gens), check=False)


# -- anchored witness -------------------------------------------------------------

def stable_support(m: CocycleModule) -> int:
    """Largest ``k`` with ``f_{s_k}`` nontrivial (0 if the cocycle is trivial).

    Then ``f`` vanishes on permutations fixing ``1..k`` pointwise, and
    ``x_{k+1}`` is a fresh variable.
    """
    k = 0
    for i, g in enumerate(m.gens, 1):
        if not g.is_identity():
            k = i
    return k


def transposition_word(i: int, p: int) -> list[int]:
    """Adjacent-swap word for ``(i p)``, ``i < p``."""
    return list(range(i, p)) + list(range(p - 2, i - 1, -1))


def _anchor_candidate(m: CocycleModule, k: int, c: Sequence[Fraction]) -> Matrix:
    # w = f_{(i p)}|_{x_p = c_i} w|_{x_i = c_i}, chained for i = k, ..., 1
    p = k + 1
    phi = None
    for i in range(k, 0, -1):
        A = m.cocycle_value(transposition_word(i, p))
        values = {p: c[i - 1]}
        values.update({j: c[j - 1] for j in range(i + 1, k + 1)})
        A = A.specialize(values)
        phi = A if phi is None else phi * A
    return phi


def anchored_witness(m, seed: int = 0) -> Matrix:
    """A trivialization ``Phi`` in ``x_1..x_k`` built from the fresh point ``x_{k+1}``."""
    m = m.underlying if isinstance(m, DifferenceModule) else m
    n, N = m.level, m.rank
    k = stable_support(m)
    if k == 0:
        return Matrix.identity(N, n)
    src = SeededSource(seed)
    choices = [[Fraction(-i) for i in range(1, k + 1)]]
    for _ in range(POINT_RETRIES - 1):
        choices.append([src.rational() for _ in range(k)])
    for c in choices:
        try:
            phi = _anchor_candidate(m, k, c)
        except (DomainError, ZeroDivisionError):
            continue
        if not phi.is_invertible():
            continue
        if witness_holds(m, phi):
            return phi
        raise InconsistencyError(
            "anchored candidate fails f_s s(Phi) = Phi; the cocycle has no fresh variable at this level")
    raise ResourceError(f"no pole-free anchor point in {POINT_RETRIES} tries")


# -- one-parameter subgroup -------------------------------------------------------

def _q_exp(nu: list[list[Fraction]], lam: RatFunc) -> Matrix:
    """``sum_k lam^k nu^k / k!`` as a matrix at ``lam``'s level."""
    N = len(nu)
    n = lam.nvars
    out = Matrix.identity(N, n)
    power = qidentity(N)
    lam_k = RatFunc.one(n)
    for k in range(1, N + 1):
        power = qmul(power, nu)
        if all(x == 0 for r in power for x in r):
            break
        lam_k = lam_k * lam
        term = Matrix.from_rational(power, n).scale(lam_k * Fraction(1, factorial(k)))
        out = out + term
    return out


@dataclass(frozen=True)
class OneParamFamily:
    """``N(lam) = exp(lam nu)``; ``family`` is a matrix at level 1 with ``lam = x_1``."""

    nu: tuple
    family: Matrix

    @property
    def rank(self) -> int:
        return len(self.nu)

    def nu_matrix(self) -> list[list[Fraction]]:
        return [list(r) for r in self.nu]

    def at(self, value) -> list[list[Fraction]]:
        return self.family.evaluate([Fraction(value)])

    def homomorphism_holds(self) -> bool:
        """``N(lam) N(mu) = N(lam + mu)`` in ``Q[lam, mu]``."""
        lam = RatFunc.variable(1, 2)
        mu = RatFunc.variable(2, 2)
        A = self.family.lift(2)
        B = self.family.substitute([mu])
        C = self.family.substitute([lam + mu])
        return A * B == C

    def is_nilpotent(self) -> bool:
        N = self.rank
        P = qidentity(N)
        for _ in range(N):
            P = qmul(P, self.nu_matrix())
        return all(x == 0 for r in P for x in r)

    def to_json(self) -> dict:
        return {"nu": [[str(x) for x in r] for r in self.nu],
                "family": self.family.to_strings()}


def _right_witness_holds(m: CocycleModule, phi: Matrix) -> bool:
    n = m.level
    return all(phi.act(swap(i, n)) == m.f(i) * phi for i in range(1, n))


def one_param_extract(m, witness: Matrix, seed: int = 0, convention: str = "left") -> OneParamFamily:
    """``X(lam) = Phi^{-1} Phi(x + lam)``, certified constant in ``x``.

    ``convention="left"`` expects ``f_s = Phi s(Phi)^{-1}`` (the one used by
    :func:`speiser_trivialize`); ``"right"`` expects ``f_s = s(Phi) Phi^{-1}``.
    ``X`` is computed at a seeded rational point and then certified by the
    identity ``Phi(x) X(lam) = Phi(x + lam)`` at level ``n + 1``.
    """
    dm = as_difference_module(m)
    m = dm.underlying
    phi = witness.phi if hasattr(witness, "phi") else witness
    n, N = m.level, m.rank
    if phi.shape != (N, N) or phi.nvars != n:
        raise DomainError("witness has the wrong shape or level")
    if convention not in ("left", "right"):
        raise DomainError(f"unknown convention {convention!r}")
    holds = witness_holds(m, phi) if convention == "left" else _right_witness_holds(m, phi)
    if not holds:
        raise DomainError("witness does not trivialize the module")
    lam1 = RatFunc.variable(1, 1)
    src = SeededSource(seed)
    X = None
    for _ in range(POINT_RETRIES):
        pt = [src.rational() for _ in range(n)]
        try:
            P0 = phi.evaluate(pt)
            P0i = qinverse(P0)
        except (DomainError, ZeroDivisionError):
            continue
        shifted = phi.substitute([RatFunc.constant(v, 1) + lam1 for v in pt])
        X = Matrix.from_rational(P0i, 1) * shifted
        break
    if X is None:
        raise ResourceError(f"no regular rational point in {POINT_RETRIES} tries")
    for r in X.rows:
        for x in r:
            if not x.is_polynomial():
                raise InconsistencyError("Phi^{-1} Phi(x + lam) is not polynomial in lam")
    lamN = RatFunc.variable(n + 1, n + 1)
    if phi.lift(n + 1) * X.substitute([lamN]) != shift_matrix(phi):
        raise InconsistencyError("Phi^{-1} Phi(x + lam) depends on x; witness is not anchored")
    nu = [[Fraction(x.derivative(1).evaluate([0])) for x in r] for r in X.rows]
    fam = OneParamFamily(tuple(tuple(r) for r in nu), X)
    if not fam.is_nilpotent():
        raise InconsistencyError("nu is not nilpotent")
    if _q_exp(nu, lam1) != X:
        raise InconsistencyError("X(lam) differs from exp(lam nu)")
    return fam


# -- Jordan data -------------------------------------------------------------------

def _nu_of(x) -> list[list[Fraction]]:
    if isinstance(x, OneParamFamily):
        return x.nu_matrix()
    return [[Fraction(v) for v in r] for r in x]


def jordan_lengths(fam) -> list[int]:
    """Jordan block sizes of the nilpotent ``nu``, descending."""
    nu = _nu_of(fam)
    N = len(nu)
    ranks = [N]
    P = qidentity(N)
    while ranks[-1] > 0:
        P = qmul(P, nu)
        r = qrank(P)
        if r == ranks[-1]:
            raise DomainError("matrix is not nilpotent")
        ranks.append(r)
    ranks.append(0)
    sizes = []
    for k in range(1, len(ranks) - 1):
        count = (ranks[k - 1] - ranks[k]) - (ranks[k] - ranks[k + 1])
        sizes.extend([k] * count)
    return sorted(sizes, reverse=True)


def jordan_basis(fam) -> list[list[Fraction]]:
    """``Q`` with ``Q^{-1} nu Q = J``; ``J`` has unit superdiagonal blocks in descending size."""
    nu = _nu_of(fam)
    N = len(nu)
    sizes = jordan_lengths(nu)
    powers = [qidentity(N)]
    for _ in range(max(sizes, default=0)):
        powers.append(qmul(powers[-1], nu))

    def apply(A, v):
        return [sum(A[i][j] * v[j] for j in range(N)) for i in range(N)]

    chains: list[list[list[Fraction]]] = []
    for m in sorted(set(sizes), reverse=True):
        need = sizes.count(m)
        base = [list(v) for v in _kernel_basis(powers[m - 1], N)] if m > 1 else []
        for ch in chains:
            # the part of each longer chain that lies in ker nu^m
            base.extend(ch[:m])
        found: list[list[Fraction]] = []
        r0 = qrank(base) if base else 0
        for v in _kernel_basis(powers[m], N):
            if len(found) == need:
                break
            if qrank(base + found + [v]) > r0 + len(found):
                found.append(v)
        if len(found) != need:
            raise InconsistencyError("Jordan chain construction failed")
        for v in found:
            chain = [apply(powers[m - 1 - t], v) for t in range(m)]
            chains.append(chain)
    cols = [c for ch in chains for c in ch]
    return [[cols[j][i] for j in range(N)] for i in range(N)]


def _kernel_basis(A, N: int) -> list[list[Fraction]]:
    if all(x == 0 for r in A for x in r):
        return [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]
    return qkernel(A)


def jordan_block_matrix(sizes: Sequence[int]) -> list[list[Fraction]]:
    N = sum(sizes)
    J = qzeros(N, N)
    pos = 0
    for s in sizes:
        for t in range(s - 1):
            J[pos + t][pos + t + 1] = Fraction(1)
        pos += s
    return J


# -- classification ----------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    rank: int
    jordan: tuple
    nu: tuple
    witness: Matrix
    family: OneParamFamily
    speiser_attempts: int | None = None

    def to_json(self) -> dict:
        return {"rank": self.rank, "jordan": list(self.jordan),
                "nu": [[str(x) for x in r] for r in self.nu]}


def classify_module(m, seed: int = 0, certify: bool = True) -> Classification:
    """Jordan type of a difference module.

    With ``certify`` the averaging witness is computed too, confirming the
    module is trivial over ``Q(x_1..x_n)``; the extraction itself runs on
    :func:`anchored_witness`.
    """
    dm = as_difference_module(m)
    attempts = None
    if certify:
        attempts = speiser_trivialize(dm.underlying, seed=seed, check=False).attempts
    phi = anchored_witness(dm.underlying, seed=seed)
    fam = one_param_extract(dm, phi, seed=seed)
    if not fam.homomorphism_holds():
        raise InconsistencyError("N(lam) N(mu) != N(lam + mu)")
    sizes = tuple(jordan_lengths(fam))
    return Classification(dm.rank, sizes, fam.nu, phi, fam, attempts)


def intertwiner(m1, m2, seed: int = 0) -> Matrix:
    """``C`` over the difference subfield with ``f1_s s(C) = C f2_s``.

    Raises :class:`DomainError` when the Jordan types differ.
    """
    d1, d2 = as_difference_module(m1), as_difference_module(m2)
    if d1.level != d2.level:
        raise DomainError("modules at different levels")
    c1 = classify_module(d1, seed=seed, certify=False)
    c2 = classify_module(d2, seed=seed, certify=False)
    if c1.jordan != c2.jordan:
        raise DomainError(f"Jordan types {list(c1.jordan)} and {list(c2.jordan)} differ")
    n = d1.level
    Q1 = Matrix.from_rational(jordan_basis(c1.family), n)
    Q2 = Matrix.from_rational(jordan_basis(c2.family), n)
    C = (c1.witness * Q1) * (c2.witness * Q2).inverse()
    for i in range(1, n):
        if d1.f(i) * C.act(swap(i, n)) != C * d2.f(i):
            raise InconsistencyError("intertwiner fails the module relation")
    if not matrix_shift_invariant(C):
        raise InconsistencyError("intertwiner leaves the difference subfield")
    return C


# -- random data ------------------------------------------------------------------

def _random_difference_linear(n: int, k: int, src: SeededSource, bound: int = 3) -> RatFunc:
    """``c_0 + c (x_a - x_b)`` for one random pair ``a < b <= k``."""
    out = RatFunc.constant(src.randint(-bound, bound), n)
    if k >= 2:
        a, b = sorted(src.sample(range(1, k + 1), 2))
        out = out + (RatFunc.variable(a, n) - RatFunc.variable(b, n)) * src.randint(1, bound)
    return out


def random_difference_conjugator(N: int, n: int, src: SeededSource, support: int | None = None,
                                 steps: int | None = None) -> Matrix:
    """Permutation matrix times ``steps`` random transvections ``1 + e E_ij``.

    Each ``e`` is ``c_0 + c (x_a - x_b)`` with ``a, b <= support``; ``support``
    defaults to ``n - 1`` so a fresh variable survives.
    """
    k = n - 1 if support is None else support
    steps = 2 * N if steps is None else steps
    one, zero = RatFunc.one(n), RatFunc.zero(n)
    perm = src.shuffle(list(range(N)))
    C = Matrix._raw([[one if perm[i] == j else zero for j in range(N)] for i in range(N)], n, N)
    if N < 2:
        return C
    for _ in range(steps):
        i, j = src.sample(range(N), 2)
        rows = [[one if a == b else zero for b in range(N)] for a in range(N)]
        rows[i][j] = _random_difference_linear(n, k, src)
        C = C * Matrix._raw(rows, n, N)
    return C


def conjugated_standard_sum(sizes: Sequence[int], n: int, src: SeededSource) -> tuple[DifferenceModule, Matrix]:
    base = standard_sum(sizes, n)
    C = random_difference_conjugator(base.rank, n, src)
    return DifferenceModule(conjugate_module(base.underlying, C), check=False), C
