"""The degree valuation on ``Q(x_1..x_n)`` and its homogeneous slices.

``v(f) = deg(den) - deg(num)`` (so ``v(x_i) = -1``).  The completion at
``v`` is a graded Laurent expansion ``f = sum_{d <= top} f_d`` with each
``f_d`` homogeneous of degree ``d``; :func:`project_degree` returns one
``f_d`` exactly, never a truncated series.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from hilbert90.errors import DomainError, ResourceError
from hilbert90.exactfield import MultiPoly, RatFunc, adjacent_transposition, apply_permutation

SQUARES_VARIABLE_CAP = 12


@dataclass(frozen=True)
class GradedSlice:
    degree: int
    value: RatFunc

    def to_json(self) -> dict:
        return {"degree": self.degree, "value": str(self.value)}

    def is_zero(self) -> bool:
        return self.value.is_zero()


def degree_valuation(f: RatFunc) -> int:
    if f.is_zero():
        raise DomainError("the valuation of 0 is undefined")
    return f.den.total_degree() - f.num.total_degree()


def scaled(f: RatFunc) -> RatFunc:
    """``f(lam x_1, ..., lam x_n)`` at level ``n+1`` with ``lam = x_{n+1}``."""
    n = f.nvars
    lam = RatFunc.variable(n + 1, n + 1)
    return f.substitute([RatFunc.variable(i, n + 1) * lam for i in range(1, n + 1)])


def is_homogeneous_of_degree(f: RatFunc, d: int) -> bool:
    """Fresh-variable test: ``f(lam x) == lam^d f(x)``."""
    if f.is_zero():
        return True
    n = f.nvars
    lam = RatFunc.variable(n + 1, n + 1)
    return scaled(f) == f.lift(n + 1) * lam ** d


def project_degree(f: RatFunc, d: int) -> GradedSlice:
    """Degree-``d`` component of the graded Laurent expansion of ``f``.

    With ``den = D_0 + D_1 + ...`` in descending homogeneous parts,
    ``1/den = sum_m Q_m / D_0^(m+1)`` where ``Q_0 = 1`` and
    ``Q_m = -sum_{j=1..m} D_j Q_{m-j} D_0^(j-1)``.  Only the depth
    ``top(f) - d`` is ever expanded.
    """
    n = f.nvars
    if f.is_zero():
        return GradedSlice(d, RatFunc.zero(n))
    a = f.num.total_degree()
    e = f.den.total_degree()
    depth = a - e - d
    if depth < 0:
        return GradedSlice(d, RatFunc.zero(n))
    num_parts = f.num.homogeneous_components()
    den_parts = f.den.homogeneous_components()
    zero = MultiPoly.zero(n)
    D = [den_parts.get(e - j, zero) for j in range(depth + 1)]
    D0 = D[0]
    powers = [MultiPoly.one(n)]
    for _ in range(depth + 1):
        powers.append(powers[-1] * D0)
    Q = [MultiPoly.one(n)]
    for m in range(1, depth + 1):
        acc = zero
        for j in range(1, m + 1):
            if D[j] and Q[m - j]:
                acc = acc + D[j] * Q[m - j] * powers[j - 1]
        Q.append(-acc)
    # sum over k + m = depth of N_k * Q_m / D0^(m+1), over the common denominator D0^(depth+1)
    top = zero
    for k in range(depth + 1):
        Nk = num_parts.get(a - k)
        m = depth - k
        if Nk is not None and Q[m]:
            top = top + Nk * Q[m] * powers[k]
    value = RatFunc(top, powers[depth + 1]) if top else RatFunc.zero(n)
    return GradedSlice(d, value)


def graded_expansion(f: RatFunc, d_hi: int, d_lo: int) -> list[GradedSlice]:
    """Slices for ``d = d_hi, d_hi - 1, ..., d_lo``."""
    return [project_degree(f, d) for d in range(d_hi, d_lo - 1, -1)]


def check_v0_linearity(f: RatFunc, g: RatFunc, c: RatFunc, d: int) -> bool:
    """``project_degree(-, d)`` is additive, ``V_0``-linear and equivariant."""
    if c.is_zero() or not is_homogeneous_of_degree(c, 0):
        raise DomainError("c must be a nonzero homogeneous function of degree 0")
    pf = project_degree(f, d).value
    if project_degree(f + g, d).value != pf + project_degree(g, d).value:
        return False
    if project_degree(c * f, d).value != c * pf:
        return False
    n = f.nvars
    for i in range(1, n):
        s = adjacent_transposition(i, n)
        if project_degree(apply_permutation(s, f), d).value != apply_permutation(s, pf):
            return False
    return True


def _is_even_in(p: MultiPoly, i: int) -> bool:
    return all(e[i - 1] % 2 == 0 for e in p.terms)


def _sign_flip(p: MultiPoly, flips: Iterable[int]) -> MultiPoly:
    flips = set(flips)
    terms = {}
    for e, c in p.terms.items():
        odd = sum(e[i - 1] for i in flips) % 2
        terms[e] = -c if odd else c
    return MultiPoly(terms, p.nvars)


def square_subfield_decompose(f: RatFunc) -> dict[tuple[int, ...], RatFunc]:
    """``f = sum_S c_S prod_{t in S} x_t`` with every ``c_S`` in ``Q(x_1^2, ..., x_n^2)``.

    Keys are sorted index tuples.  The denominator is made even by
    multiplying through by its sign-flipped conjugates; only the variables
    in which it is not already even need flipping.
    """
    n = f.nvars
    den_vars = sorted(f.den.variables())
    if len(den_vars) > SQUARES_VARIABLE_CAP:
        raise ResourceError(
            f"denominator involves {len(den_vars)} variables (cap {SQUARES_VARIABLE_CAP})")
    odd_vars = [i for i in den_vars if not _is_even_in(f.den, i)]
    num, den = f.num, f.den
    for r in range(1, len(odd_vars) + 1):
        for flips in itertools.combinations(odd_vars, r):
            conj = _sign_flip(f.den, flips)
            num = num * conj
            den = den * conj
    buckets: dict[tuple[int, ...], dict] = {}
    for e, c in num.terms.items():
        S = tuple(i + 1 for i, k in enumerate(e) if k % 2)
        reduced = tuple(k - (k % 2) for k in e)
        buckets.setdefault(S, {})[reduced] = c
    return {S: RatFunc(MultiPoly(t, n), den) for S, t in sorted(buckets.items())}


def squares_resum(parts: dict[tuple[int, ...], RatFunc], n: int) -> RatFunc:
    out = RatFunc.zero(n)
    for S, c in parts.items():
        mono = RatFunc.one(n)
        for t in S:
            mono = mono * RatFunc.variable(t, n)
        out = out + c * mono
    return out


def has_even_parity(c: RatFunc) -> bool:
    return all(k % 2 == 0 for p in (c.num, c.den) for e in p.terms for k in e)
