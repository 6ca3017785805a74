"""Elementary symmetric polynomials and Vandermonde products."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from hilbert90.errors import DimensionError, DomainError
from hilbert90.exactfield.poly import MultiPoly


def elementary_symmetric(s: int, vars: Iterable[int], n: int) -> MultiPoly:
    """``sigma_s`` of the listed variables; zero when ``s > |vars|``."""
    vs = sorted(set(vars))
    if s < 0:
        raise DomainError("negative degree")
    for v in vs:
        if not 1 <= v <= n:
            raise DimensionError(f"x{v} is not a variable at level {n}")
    if s > len(vs):
        return MultiPoly.zero(n)
    terms = {}
    for sub in combinations(vs, s):
        e = [0] * n
        for v in sub:
            e[v - 1] = 1
        terms[tuple(e)] = 1
    return MultiPoly._make(terms, n)


def vandermonde_product(vars: Sequence[int], n: int | None = None) -> MultiPoly:
    """``prod_{i<j} (x_{v_i} - x_{v_j})``; zero if a variable repeats."""
    vs = list(vars)
    if n is None:
        n = max(vs, default=0)
    for v in vs:
        if not 1 <= v <= n:
            raise DimensionError(f"x{v} is not a variable at level {n}")
    if len(set(vs)) != len(vs):
        return MultiPoly.zero(n)
    out = MultiPoly.one(n)
    x = MultiPoly.gens(n)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            out = out * (x[vs[i] - 1] - x[vs[j] - 1])
    return out
