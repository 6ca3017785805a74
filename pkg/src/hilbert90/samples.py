"""Seeded generators for the random instances used by the check suite and the tests."""

from __future__ import annotations

from hilbert90.exactfield import FinPermutation, MultiPoly, RatFunc
from hilbert90.linalg import Matrix
from hilbert90.partfrac import TPoly
from hilbert90.rng import SeededSource


def random_poly(n: int, src: SeededSource, max_deg: int = 2, terms: int = 3,
                coeff: int = 5, variables: list[int] | None = None) -> MultiPoly:
    """Sum of ``terms`` random monomials of degree ``<= max_deg`` in ``variables`` (default all)."""
    vs = list(range(1, n + 1)) if variables is None else list(variables)
    t: dict = {}
    for _ in range(terms):
        e = [0] * n
        if vs:
            for _ in range(src.randint(0, max_deg)):
                e[src.choice(vs) - 1] += 1
        t[tuple(e)] = t.get(tuple(e), 0) + src.randint(-coeff, coeff)
    return MultiPoly(t, n)


def random_nonzero_poly(n: int, src: SeededSource, **kw) -> MultiPoly:
    while True:
        p = random_poly(n, src, **kw)
        if p:
            return p


def random_ratfunc(n: int, src: SeededSource, num_deg: int = 2, den_deg: int = 2,
                   den_vars: list[int] | None = None) -> RatFunc:
    num = random_nonzero_poly(n, src, max_deg=num_deg, terms=3)
    den = random_nonzero_poly(n, src, max_deg=den_deg, terms=2, variables=den_vars)
    return RatFunc(num, den)


def random_permutation(n: int, src: SeededSource) -> FinPermutation:
    return FinPermutation(src.shuffle(list(range(1, n + 1))))


def random_coboundary_phi(N: int, n: int, src: SeededSource) -> Matrix:
    """``D U L`` with ``D`` a monomial diagonal and ``U``, ``L`` unitriangular polynomial.

    Denominators of the resulting cocycle are then monomials, which keeps
    averaging cheap; a generic ``Phi`` carries its determinant into every
    denominator.
    """
    one, zero = RatFunc.one(n), RatFunc.zero(n)
    D = Matrix.diag([RatFunc.from_poly(MultiPoly.monomial([src.randint(0, 1) for _ in range(n)],
                                                          src.choice([1, 2, -1, 3])))
                     for _ in range(N)], n)
    U = Matrix._raw([[one if i == j else (RatFunc.from_poly(random_poly(n, src, 2, 2)) if j > i else zero)
                      for j in range(N)] for i in range(N)], n, N)
    L = Matrix._raw([[one if i == j else (RatFunc.from_poly(random_poly(n, src, 1, 2)) if j < i else zero)
                      for j in range(N)] for i in range(N)], n, N)
    return D * U * L


def random_rational_matrix(rows: int, cols: int, n: int, src: SeededSource, rank: int | None = None) -> Matrix:
    """Random polynomial matrix; with ``rank`` it is a product of ``rows x rank`` and ``rank x cols``."""
    def entry():
        return RatFunc.from_poly(random_poly(n, src, 1, 2, coeff=3))
    if rank is None:
        return Matrix._raw([[entry() for _ in range(cols)] for _ in range(rows)], n, cols)
    A = Matrix._raw([[entry() for _ in range(rank)] for _ in range(rows)], n, rank)
    B = Matrix._raw([[entry() for _ in range(cols)] for _ in range(rank)], n, cols)
    return A * B


def random_partial_fraction_instance(m: int, src: SeededSource, max_deg: int = 4):
    """``(num, factors)`` over ``Q(x_1..x_m)`` with ``deg_t`` of the denominator ``<= max_deg``.

    Factors are monic, linear or quadratic in ``t``, and resampled until
    pairwise coprime.
    """
    while True:
        total = src.randint(1, max_deg)
        factors = []
        used = 0
        while used < total:
            d = 1 if total - used == 1 else src.choice([1, 1, 2])
            mult = src.randint(1, max(1, (total - used) // d))
            cs = [RatFunc.from_poly(random_poly(m, src, 1, 2, coeff=4)) for _ in range(d)]
            factors.append((TPoly(cs + [1], m), mult))
            used += d * mult
        ok = all(factors[i][0].gcd(factors[j][0]).degree == 0
                 for i in range(len(factors)) for j in range(i + 1, len(factors)))
        if ok:
            break
    deg_num = src.randint(0, total + 1)
    num = TPoly([RatFunc.from_poly(random_poly(m, src, 1, 2, coeff=4)) for _ in range(deg_num + 1)], m)
    if num.is_zero():
        num = TPoly([1], m)
    return num, factors
