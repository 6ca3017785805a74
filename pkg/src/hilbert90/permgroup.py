"""Open subgroups of the finitary symmetric group at a finite level, and growth counts.

Groups are closed by explicit element enumeration (elements are image
tuples), capped at ``CLOSURE_CAP`` elements.  Points are ``1..n``.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from hilbert90.errors import DomainError, InconsistencyError, ResourceError
from hilbert90.exactfield import FinPermutation

CLOSURE_CAP = 10 ** 6

Perm = tuple  # image tuple, 0-based positions holding 1-based images


# -- closure ----------------------------------------------------------------

def _compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q`` on image tuples."""
    return tuple([p[j - 1] for j in q])


def closure(gens: Iterable[Perm], n: int, cap: int = CLOSURE_CAP) -> set[Perm]:
    """All elements of the group generated by ``gens`` inside ``S_n``."""
    ident = tuple(range(1, n + 1))
    gens = [tuple(g) for g in gens if tuple(g) != ident]
    for g in gens:
        if len(g) != n:
            raise DomainError("generator at the wrong level")
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = tuple([g[j - 1] for j in x])
                if y not in elems:
                    elems.add(y)
                    new.append(y)
                    if len(elems) > cap:
                        raise ResourceError(f"group closure exceeded {cap} elements")
        frontier = new
    return elems


def sym_generators(points: Iterable[int], n: int) -> list[Perm]:
    """Transpositions of consecutive elements of ``points`` (generate ``Sym(points)``)."""
    pts = sorted(points)
    out = []
    for a, b in zip(pts, pts[1:]):
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        out.append(tuple(im))
    return out


def pointwise_stabilizer_generators(T: Iterable[int], n: int) -> list[Perm]:
    T = set(T)
    return sym_generators([i for i in range(1, n + 1) if i not in T], n)


# -- strong generation ------------------------------------------------------

def strong_generation_holds(T1: Iterable[int], T2: Iterable[int], n: int) -> bool:
    """Whether the two pointwise stabilizers generate that of the intersection inside ``S_n``.

    With complements ``A, B`` the generated group is ``Sym(A) x Sym(B)`` glued
    along ``A ∩ B``; it is all of ``Sym(A ∪ B)`` exactly when the complements
    meet or one contains the other.
    """
    T1, T2 = set(T1), set(T2)
    return T1 <= T2 or T2 <= T1 or n > len(T1 | T2)


@dataclass(frozen=True)
class JoinCertificate:
    support: frozenset
    generated_order: int
    expected_order: int


def stabilizer_join(T1: Iterable[int], T2: Iterable[int], n: int, verify: bool = False):
    """``T1 ∩ T2``; with ``verify`` also close the generated group and compare orders.

    Returns the intersection as a frozenset, or a ``JoinCertificate`` when
    ``verify`` is set.
    """
    T1, T2 = frozenset(T1), frozenset(T2)
    for t in T1 | T2:
        if not 1 <= t <= n:
            raise DomainError(f"point {t} is outside 1..{n}")
    if not strong_generation_holds(T1, T2, n):
        raise DomainError(
            f"level too small: need n > |T1 ∪ T2| = {len(T1 | T2)} (or nested supports), got n = {n}")
    meet = T1 & T2
    if not verify:
        return meet
    gens = pointwise_stabilizer_generators(T1, n) + pointwise_stabilizer_generators(T2, n)
    order = len(closure(gens, n))
    expected = _factorial(n - len(meet))
    if order != expected:
        raise InconsistencyError(
            f"stabilizers of {sorted(T1)} and {sorted(T2)} generate a group of order {order}, "
            f"expected {expected}")
    return JoinCertificate(meet, order, expected)


def _factorial(k: int) -> int:
    return prod(range(1, k + 1))


# -- open subgroups -----------------------------------------------------------

@dataclass(frozen=True)
class OpenSubgroupSpec:
    """Promised support ``S`` plus extra generators supported in the window ``W``."""

    support: frozenset
    extra_gens: tuple = ()
    window: frozenset | None = None

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        gens = tuple(g if isinstance(g, FinPermutation) else FinPermutation(g) for g in self.extra_gens)
        object.__setattr__(self, "extra_gens", gens)
        w = self.window
        if w is None:
            w = set(self.support)
            for g in gens:
                w |= g.support()
        object.__setattr__(self, "window", frozenset(w))
        if not self.support <= self.window:
            raise DomainError("support must lie inside the window")
        for g in gens:
            if not g.support() <= self.window:
                raise DomainError(f"generator {g} moves points outside the window")

    def to_json(self) -> dict:
        return {"support": sorted(self.support), "window": sorted(self.window),
                "extra_gens": [list(g.images) for g in self.extra_gens]}

    @classmethod
    def from_json(cls, data: dict) -> "OpenSubgroupSpec":
        """Generators may be image lists or cycle strings such as ``"(1 2 3)"``."""
        window = frozenset(data["window"]) if "window" in data else None
        points = set(data["support"]) | set(window or ())
        for g in data.get("extra_gens", []):
            if isinstance(g, str):
                points |= {int(t) for t in re.findall(r"\d+", g)}
            else:
                points |= set(g)
        m = max(points, default=0)
        gens = []
        for g in data.get("extra_gens", []):
            p = FinPermutation.parse(g, m) if isinstance(g, str) else FinPermutation(g)
            gens.append(p.lift(m))
        return cls(frozenset(data["support"]), tuple(gens), window)


@dataclass(frozen=True)
class CanonicalOpenSubgroup:
    T: tuple
    H: tuple  # sorted tuple of image tuples on T

    def to_json(self) -> dict:
        return {"T": list(self.T), "H": [list(h) for h in self.H]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "CanonicalOpenSubgroup":
        return cls(tuple(data["T"]), tuple(sorted(tuple(h) for h in data["H"])))

    @property
    def order(self) -> int:
        return len(self.H)


def _lift_images(g: FinPermutation, n: int) -> Perm:
    return g.lift(n).images


def subgroup_elements(spec: OpenSubgroupSpec, n: int, cap: int = CLOSURE_CAP) -> set[Perm]:
    gens = pointwise_stabilizer_generators(spec.support, n) + [_lift_images(g, n) for g in spec.extra_gens]
    return closure(gens, n, cap)


def support_fixpoint(elems: Iterable[Perm], S: Iterable[int]) -> frozenset:
    """Iterate ``T <- T ∩ g(T)`` over the group elements until stable."""
    elems = list(elems)
    T = set(S)
    changed = True
    while changed:
        changed = False
        for g in elems:
            img = {g[t - 1] for t in T}
            if img != T:
                new = T & img
                if new != T:
                    T = new
                    changed = True
    return frozenset(T)


def canonicalize_open_subgroup(spec: OpenSubgroupSpec, n: int, cap: int = CLOSURE_CAP,
                               check_minimal: bool = True) -> CanonicalOpenSubgroup:
    """Canonical pair ``(T, H)`` of the open subgroup generated by ``spec`` at level ``n``."""
    need = len(spec.window) + len(spec.support)
    if n < need:
        raise DomainError(f"level too small: need n >= |W| + |S| = {need}, got {n}")
    if max(spec.window, default=0) > n:
        raise DomainError("window exceeds the level")
    elems = subgroup_elements(spec, n, cap)
    Ts = tuple(sorted(support_fixpoint(elems, spec.support)))
    H = sorted({tuple(g[t - 1] for t in Ts) for g in elems})
    result = CanonicalOpenSubgroup(Ts, tuple(H))
    if check_minimal:
        verify_minimal_support(result, elems, spec, n)
    return result


def verify_minimal_support(canon: CanonicalOpenSubgroup, elems: set[Perm], spec: OpenSubgroupSpec, n: int) -> None:
    """Check that ``Sym_{|T} ⊆ U`` and that no point of ``T`` can be dropped."""
    T = set(canon.T)
    for g in pointwise_stabilizer_generators(T, n):
        if g not in elems:
            raise InconsistencyError(f"pointwise stabilizer of {sorted(T)} is not contained in the subgroup")
    fresh = [p for p in range(1, n + 1) if p not in spec.window and p not in T]
    for t in T:
        if not fresh:
            raise InconsistencyError("no fresh point available for the minimality test")
        im = list(range(1, n + 1))
        f = fresh[0]
        im[t - 1], im[f - 1] = f, t
        if tuple(im) in elems:
            raise InconsistencyError(f"point {t} can be moved to a fresh point; support is not minimal")
    for g in elems:
        if {g[t - 1] for t in T} != T:
            raise InconsistencyError("subgroup does not preserve its canonical support")


def minimal_supports(elems: set[Perm], n: int, candidates: Iterable[Iterable[int]]) -> list[frozenset]:
    """Inclusion-minimal sets among ``candidates`` whose pointwise stabilizer lies in the group."""
    good = []
    for T in candidates:
        T = frozenset(T)
        if all(g in elems for g in pointwise_stabilizer_generators(T, n)):
            good.append(T)
    return [T for T in good if not any(U < T for U in good)]


# -- growth -----------------------------------------------------------------

@dataclass(frozen=True)
class GrowthParams:
    q: int = 1
    v: int = 0

    def __post_init__(self):
        if self.q < 1:
            raise DomainError("q must be 1 or a prime power")
        if self.q > 1 and not _is_prime_power(self.q):
            raise DomainError(f"q = {self.q} is not a prime power")
        if self.v < 0:
            raise DomainError("v must be nonnegative")
        if self.q == 1 and self.v != 0:
            raise DomainError("q = 1 forces v = 0")


def _is_prime_power(q: int) -> bool:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def q_size(s: int, q: int) -> int:
    """``[s]_q``: the size of a rank-``s`` object."""
    return s if q == 1 else q ** s


def embedding_count(params: GrowthParams | int, n: int, N: int) -> int:
    """``d_n(N) = ([N]-[0]) ... ([N]-[n-1])``; zero when ``n > N``."""
    q = params.q if isinstance(params, GrowthParams) else int(params)
    if n < 0 or N < 0:
        raise DomainError("negative rank")
    if n > N:
        return 0
    top = q_size(N, q)
    return prod(top - q_size(i, q) for i in range(n))


def growth_bounds_check(params: GrowthParams, n: int, m: int, N: int) -> bool:
    """Numerically evaluate the chain of growth inequalities for ``n + m <= N``."""
    if min(n, m, N) < 0:
        raise DomainError("negative argument")
    if n + m > N:
        raise DomainError("need n + m <= N")
    q, v = params.q, params.v
    dnn = embedding_count(params, n, n)
    lower = Fraction((q_size(N, q) - q_size(n + m - 1, q)) ** n if n else 1, dnn)
    middle = Fraction(embedding_count(params, m + n, N), embedding_count(params, m, N) * dnn)
    upper = q ** (v * n) * embedding_count(params, n, N)
    top = q ** (v * n) * q_size(N, q) ** n
    return lower <= middle <= upper <= top


# -- brute-force enumeration oracles ------------------------------------------

BRUTE_FORCE_WORK = 3 * 10 ** 5


def _vectors(q: int, N: int) -> list[tuple[int, ...]]:
    if q not in (2, 3, 5, 7):
        raise DomainError("vector enumeration supports prime q only")
    return list(itertools.product(range(q), repeat=N))


def _span_add(span: set, v: tuple, q: int) -> set:
    out = set()
    for a in range(q):
        av = tuple(a * x % q for x in v)
        for w in span:
            out.add(tuple((x + y) % q for x, y in zip(av, w)))
    return out


def count_injective_linear_maps(q: int, n: int, N: int) -> tuple[int, str]:
    """Count injective linear maps ``F_q^n -> F_q^N`` by enumeration.

    Small cases enumerate every column tuple depth-first.  Larger ones walk a
    single chain of spans and enumerate, at each depth, the vectors outside the
    current span (the count does not depend on the chain because ``GL_N``
    acts transitively on independent tuples).  Returns the count and the
    method used.
    """
    if n > N:
        return 0, "empty"
    vecs = _vectors(q, N)
    zero = tuple([0] * N)
    est = embedding_count(q, n, N) * len(vecs)
    if est <= BRUTE_FORCE_WORK:

        def dfs(span: set, depth: int) -> int:
            if depth == n:
                return 1
            total = 0
            for v in vecs:
                if v not in span:
                    total += dfs(_span_add(span, v, q), depth + 1)
            return total

        return dfs({zero}, 0), "tuples"
    span = {zero}
    total = 1
    for depth in range(n):
        outside = [v for v in vecs if v not in span]
        total *= len(outside)
        span = _span_add(span, outside[len(outside) // 2], q)
    return total, "chain"


def count_injections(n: int, N: int) -> int:
    return sum(1 for _ in itertools.permutations(range(N), n))


def brute_force_embedding_count(q: int, n: int, N: int) -> int:
    if q == 1:
        return count_injections(n, N)
    return count_injective_linear_maps(q, n, N)[0]
