"""Semilinear modules presented by 1-cocycles on adjacent transpositions.

A rank-``N`` module at level ``n`` is given by matrices ``f_{s_i}`` over
``Q(x_1..x_n)`` for ``s_i = (i i+1)``.  The group acts on coordinate vectors
by ``sigma . v = f_sigma sigma(v)`` and the cocycle rule is
``f_{sigma tau} = f_sigma sigma(f_tau)``.  A witness ``Phi`` trivializes the
module when ``f_sigma = Phi sigma(Phi)^{-1}``, checked without inversion as
``f_s s(Phi) = Phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from hilbert90.errors import DimensionError, DomainError, InconsistencyError, ResourceError
from hilbert90.exactfield import FinPermutation, MultiPoly, RatFunc, as_ratfunc, is_fixed_by
from hilbert90.linalg import Matrix, rank_specialized
from hilbert90.rng import SeededSource

SPEISER_MAX_LEVEL = 6
SPEISER_RETRIES = 8
PROBE_COEFF_BOUND = 9


def swap(i: int, n: int) -> FinPermutation:
    return FinPermutation.transposition(i, i + 1, n)


class CocycleModule:
    __slots__ = ("level", "rank", "gens")

    def __init__(self, level: int, rank: int, gens: Sequence[Matrix]):
        if level < 1:
            raise DomainError("level must be at least 1")
        gens = tuple(gens)
        if len(gens) != level - 1:
            raise DimensionError(f"need {level - 1} generator matrices, got {len(gens)}")
        for g in gens:
            if g.shape != (rank, rank):
                raise DimensionError(f"generator of shape {g.shape}, expected {(rank, rank)}")
            if g.nvars != level:
                raise DimensionError("generator entries live at the wrong level")
        self.level = level
        self.rank = rank
        self.gens = gens

    @classmethod
    def trivial(cls, rank: int, level: int) -> "CocycleModule":
        one = Matrix.identity(rank, level)
        return cls(level, rank, [one] * (level - 1))

    def f(self, i: int) -> Matrix:
        """``f_{s_i}``, 1-based."""
        return self.gens[i - 1]

    def __eq__(self, other) -> bool:
        return (isinstance(other, CocycleModule) and self.level == other.level
                and self.rank == other.rank and self.gens == other.gens)

    def __hash__(self) -> int:
        return hash((self.level, self.rank, self.gens))

    def __repr__(self) -> str:
        return f"CocycleModule(level={self.level}, rank={self.rank})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"level": self.level, "rank": self.rank,
                "gens": [{"swap": i + 1, "matrix": g.to_strings()} for i, g in enumerate(self.gens)]}

    @classmethod
    def from_json(cls, data: dict) -> "CocycleModule":
        n, N = int(data["level"]), int(data["rank"])
        by_swap = {}
        for item in data.get("gens", []):
            by_swap[int(item["swap"])] = Matrix.from_strings(item["matrix"], n)
        gens = [by_swap.get(i, Matrix.identity(N, n)) for i in range(1, n)]
        return cls(n, N, gens)

    # -- action -------------------------------------------------------------

    def act_vector(self, i: int, v: Sequence[RatFunc]) -> list[RatFunc]:
        s = swap(i, self.level)
        return self.f(i).apply_vector([x.permute_variables(s.images) for x in v])

    def cocycle_table(self) -> dict[tuple, Matrix]:
        """``f_sigma`` for every ``sigma`` in ``S_n``, built by ``f_{s w} = f_s s(f_w)``."""
        if factorial(self.level) > factorial(SPEISER_MAX_LEVEL):
            raise ResourceError(f"cocycle table needs n! matrices; level {self.level} exceeds {SPEISER_MAX_LEVEL}")
        n = self.level
        table = {FinPermutation.identity(n).images: Matrix.identity(self.rank, n)}
        frontier = [FinPermutation.identity(n)]
        swaps = [swap(i, n) for i in range(1, n)]
        while frontier:
            new = []
            for w in frontier:
                fw = table[w.images]
                for i, s in enumerate(swaps, 1):
                    sw = s * w
                    if sw.images not in table:
                        table[sw.images] = self.f(i) * fw.act(s)
                        new.append(sw)
            frontier = new
        return table

    def cocycle_value(self, word: Sequence[int]) -> Matrix:
        """``f`` of ``s_{w_1} s_{w_2} ... s_{w_k}`` along this word."""
        n = self.level
        out = Matrix.identity(self.rank, n)
        prefix = FinPermutation.identity(n)
        for i in word:
            out = out * self.f(i).act(prefix)
            prefix = prefix * swap(i, n)
        return out


# -- relation checks ----------------------------------------------------------

def _gen_invertible(g: Matrix, src: SeededSource) -> bool:
    if rank_specialized(g, src) == g.nrows:
        return True
    return not g.det().is_zero()


def relation_failures(m: CocycleModule) -> list[str]:
    """Names of the semilinear Coxeter relations that fail (empty when valid)."""
    n, N = m.level, m.rank
    ident = Matrix.identity(N, n)
    bad = []
    sw = [None] + [swap(i, n) for i in range(1, n)]
    for i in range(1, n):
        if m.f(i) * m.f(i).act(sw[i]) != ident:
            bad.append(f"involution s{i}")
    for i in range(1, n - 1):
        a, b = m.f(i), m.f(i + 1)
        s, t = sw[i], sw[i + 1]
        lhs = a * b.act(s) * a.act(s * t)
        rhs = b * a.act(t) * b.act(t * s)
        if lhs != rhs:
            bad.append(f"braid s{i} s{i + 1}")
    for i in range(1, n):
        for j in range(i + 2, n):
            a, b = m.f(i), m.f(j)
            if a * b.act(sw[i]) != b * a.act(sw[j]):
                bad.append(f"commutation s{i} s{j}")
    return bad


def validate_cocycle(m: CocycleModule, seed: int = 0) -> bool:
    src = SeededSource(seed)
    for i, g in enumerate(m.gens, 1):
        if not _gen_invertible(g, src):
            raise DomainError(f"generator matrix for s{i} is singular")
    return not relation_failures(m)


def coboundary_from(phi: Matrix, n: int | None = None) -> CocycleModule:
    """The module with ``f_s = phi s(phi)^{-1}``."""
    if n is None:
        n = phi.nvars
    if phi.nvars != n:
        raise DimensionError("phi lives at a different level")
    if not phi.is_square():
        raise DimensionError("phi must be square")
    try:
        inv = phi.inverse()
    except DomainError:
        raise DomainError("phi is singular") from None
    gens = []
    for i in range(1, n):
        s = swap(i, n)
        gens.append(phi * inv.act(s))
    return CocycleModule(n, phi.nrows, gens)


# -- trivialization -----------------------------------------------------------

@dataclass(frozen=True)
class TrivializationWitness:
    phi: Matrix
    attempts: int = 1

    def to_json(self) -> dict:
        return {"phi": self.phi.to_strings()}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "TrivializationWitness":
        return cls(Matrix.from_strings(data["phi"], n))


def witness_holds(m: CocycleModule, phi: Matrix) -> bool:
    """``f_s s(phi) = phi`` for every generator (equivalent to ``f_s = phi s(phi)^{-1}``)."""
    n = m.level
    return all(m.f(i) * phi.act(swap(i, n)) == phi for i in range(1, n))


def random_probe(N: int, n: int, src: SeededSource) -> Matrix:
    """``N x N`` matrix of random polynomials of degree at most 1."""
    rows = []
    b = PROBE_COEFF_BOUND
    for _ in range(N):
        row = []
        for _ in range(N):
            terms = {(0,) * n: src.randint(-b, b)}
            for v in range(n):
                e = [0] * n
                e[v] = 1
                terms[tuple(e)] = src.randint(-b, b)
            row.append(RatFunc.from_poly(MultiPoly(terms, n)))
        rows.append(row)
    return Matrix._raw(rows, n, N)


def _invertible(phi: Matrix, src: SeededSource) -> bool:
    if rank_specialized(phi, src) == phi.nrows:
        return True
    return not phi.det().is_zero()


def speiser_trivialize(m: CocycleModule, seed: int = 0, retries: int = SPEISER_RETRIES,
                       check: bool = True) -> TrivializationWitness:
    """Average ``sum_sigma f_sigma sigma(B)`` over seeded probes ``B`` until invertible."""
    n, N = m.level, m.rank
    if n > SPEISER_MAX_LEVEL:
        raise ResourceError(f"averaging over {n}! elements exceeds the cap n <= {SPEISER_MAX_LEVEL}")
    if check:
        bad = relation_failures(m)
        if bad:
            raise DomainError(f"not a cocycle: {', '.join(bad)} fail")
    if N == 0:
        return TrivializationWitness(Matrix.identity(0, n))
    if all(g.is_identity() for g in m.gens):
        return TrivializationWitness(Matrix.identity(N, n))
    table = m.cocycle_table()
    src = SeededSource(seed)
    perms = [FinPermutation(p) for p in sorted(table)]
    for attempt in range(1, retries + 1):
        B = random_probe(N, n, src)
        phi = Matrix.zeros(N, N, n)
        for p in perms:
            phi = phi + table[p.images] * B.act(p)
        if _invertible(phi, src):
            if not witness_holds(m, phi):
                raise InconsistencyError("averaged matrix fails the witness identity")
            return TrivializationWitness(phi, attempt)
    raise ResourceError(f"all {retries} probes gave singular averages")


def witness_ambiguity_fixed(phi1: Matrix, phi2: Matrix) -> bool:
    """Whether ``phi1^{-1} phi2`` has every entry fixed by all adjacent transpositions."""
    n = phi1.nvars
    X = phi1.inverse() * phi2
    gens = [swap(i, n) for i in range(1, n)]
    return all(is_fixed_by(x, gens) for r in X.rows for x in r)


# -- eigenvector independence ---------------------------------------------------

@dataclass(frozen=True)
class IndependenceReport:
    status: str  # "independent", "not applicable (dependent over A^G)", "violated"
    k_rank: int
    count: int

    def __bool__(self) -> bool:
        return self.status != "violated"


def check_eigen_independence(vectors: Sequence[Sequence[object]], m: CocycleModule,
                             chi: Sequence[object]) -> IndependenceReport:
    """Eigenvectors independent over the invariant field are independent over K.

    ``chi[i-1]`` is the scalar by which ``s_i`` acts on every vector.
    """
    n, N = m.level, m.rank
    vecs = [[as_ratfunc(x, n) for x in v] for v in vectors]
    chis = [as_ratfunc(c, n) for c in chi]
    if len(chis) != n - 1:
        raise DimensionError(f"need {n - 1} character values")
    for k, v in enumerate(vecs):
        if len(v) != N:
            raise DimensionError("vector length differs from the module rank")
        for i in range(1, n):
            if m.act_vector(i, v) != [chis[i - 1] * x for x in v]:
                raise DomainError(f"vector {k} is not a chi-eigenvector for s{i}")
    if not vecs:
        return IndependenceReport("independent", 0, 0)
    A = Matrix._raw([list(r) for r in zip(*vecs)], n, len(vecs))
    r = A.rank_exact()
    if r == len(vecs):
        return IndependenceReport("independent", r, len(vecs))
    gens = [swap(i, n) for i in range(1, n)]
    # the relation space is stable under the group, so its reduced basis is fixed
    for rel in A.kernel():
        if not all(is_fixed_by(c, gens) for c in rel):
            return IndependenceReport("violated", r, len(vecs))
    return IndependenceReport("not applicable (dependent over A^G)", r, len(vecs))


# -- constructions ------------------------------------------------------------

def direct_sum(m1: CocycleModule, m2: CocycleModule) -> CocycleModule:
    if m1.level != m2.level:
        raise DimensionError("direct sum of modules at different levels")
    return CocycleModule(m1.level, m1.rank + m2.rank, [a.block_diag(b) for a, b in zip(m1.gens, m2.gens)])


def tensor_product(m1: CocycleModule, m2: CocycleModule) -> CocycleModule:
    if m1.level != m2.level:
        raise DimensionError("tensor product of modules at different levels")
    return CocycleModule(m1.level, m1.rank * m2.rank, [a.kron(b) for a, b in zip(m1.gens, m2.gens)])


def conjugate_module(m: CocycleModule, C: Matrix) -> CocycleModule:
    """Change of basis: ``f'_s = C^{-1} f_s s(C)``."""
    n = m.level
    Ci = C.inverse()
    return CocycleModule(n, m.rank, [Ci * m.f(i) * C.act(swap(i, n)) for i in range(1, n)])
