"""The property suite behind ``hilbert90 check all`` and the acceptance tests.

Each criterion is a function ``(level, seed) -> CheckResult``.  ``level``
caps every truncation level the criterion would otherwise use, so a small
``--level`` gives a quick smoke run; ``level=None`` runs the full sizes.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import comb, factorial, perm
from typing import Callable

from hilbert90.errors import Hilbert90Error
from hilbert90.exactfield import FinPermutation, RatFunc, adjacent_transposition, apply_permutation
from hilbert90.grading import (
    check_v0_linearity,
    degree_valuation,
    has_even_parity,
    project_degree,
    square_subfield_decompose,
    squares_resum,
)
from hilbert90.partfrac import partial_fractions
from hilbert90.permgroup import (
    GrowthParams,
    OpenSubgroupSpec,
    brute_force_embedding_count,
    canonicalize_open_subgroup,
    closure,
    embedding_count,
    stabilizer_join,
)
from hilbert90.permmod import (
    alpha_map_matrix,
    binomial_basis_coeffs,
    omega_iso_check,
    product_decompose,
    product_orbit_multiplicities,
    set_partition_count,
    surjection_count,
)
from hilbert90.rng import SeededSource
from hilbert90.samples import (
    random_coboundary_phi,
    random_partial_fraction_instance,
    random_ratfunc,
)
from hilbert90.semilin import coboundary_from, speiser_trivialize, witness_holds
from hilbert90.unipmod import classify_module, conjugated_standard_sum

PARTITIONS_UP_TO_4 = [(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1),
                      (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "failures": self.failures[:10]}


def _cap(n: int, level: int | None) -> int:
    return n if level is None else min(n, level)


class _Tally:
    def __init__(self):
        self.count = 0
        self.failures: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(what)

    def guard(self, what: str, fn: Callable[[], bool]) -> None:
        try:
            ok = bool(fn())
        except Hilbert90Error as exc:
            self.failures.append(f"{what}: {type(exc).__name__}: {exc}")
            self.count += 1
            return
        self.check(ok, what)


# -- 1 ------------------------------------------------------------------------

def check_hilbert90(level: int | None = None, seed: int = 0) -> CheckResult:
    src = SeededSource(seed).spawn(1)
    t = _Tally()
    top = _cap(4, level)
    for i in range(50):
        N = 1 + i % 3
        n = 2 + (i // 3) % max(1, top - 1)
        n = min(n, top) if top >= 2 else 2
        phi0 = random_coboundary_phi(N, n, src)
        m = coboundary_from(phi0)
        t.guard(f"instance {i} (N={N}, n={n})",
                lambda: witness_holds(m, speiser_trivialize(m, seed=seed + i).phi))
    return CheckResult(1, "hilbert90-round-trip", not t.failures,
                       f"{t.count - len(t.failures)}/{t.count} coboundaries trivialized exactly", failures=t.failures)


# -- 2 ------------------------------------------------------------------------

def check_strong_generation(level: int | None = None, seed: int = 0) -> CheckResult:
    n = _cap(7, level)
    pts = range(1, min(5, n) + 1)
    sets = [frozenset(c) for k in range(len(pts) + 1) for c in itertools.combinations(pts, k)]
    t = _Tally()
    for T1 in sets:
        for T2 in sets:
            def run():
                cert = stabilizer_join(T1, T2, n, verify=True)
                return cert.support == T1 & T2 and cert.generated_order == factorial(n - len(T1 & T2))
            t.guard(f"{sorted(T1)} {sorted(T2)}", run)
    return CheckResult(2, "strong-generation", not t.failures,
                       f"{t.count - len(t.failures)}/{t.count} pairs at n={n} close to the expected stabilizer",
                       failures=t.failures)


# -- 3 ------------------------------------------------------------------------

def symmetric_subgroups(k: int) -> list[tuple[frozenset, tuple]]:
    """Every subgroup of ``S_k`` with a generating pair (all subgroups of ``S_4`` are 2-generated)."""
    elems = list(itertools.permutations(range(1, k + 1)))
    found: dict[frozenset, tuple] = {}
    for a, b in itertools.combinations_with_replacement(elems, 2):
        G = frozenset(closure([a, b], k))
        if G not in found:
            found[G] = (a, b)
    return sorted(found.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))


def _lift(p: tuple, n: int) -> FinPermutation:
    return FinPermutation(tuple(p) + tuple(range(len(p) + 1, n + 1)))


def check_canonicalization(level: int | None = None, seed: int = 0, wide: bool = True) -> CheckResult:
    """Subgroups ``H`` of ``S_4`` on ``{1..4}`` presented several ways inside level 8.

    Presentations: all elements; a generating pair; the pair plus redundant
    products; and (``wide``) a larger support ``{1..5}`` with the extra
    generator ``(5 6)``, which needs level 11.
    """
    n = _cap(8, level)
    src = SeededSource(seed).spawn(3)
    t = _Tally()
    groups = symmetric_subgroups(4)
    S = frozenset(range(1, 5))
    for G, (a, b) in groups:
        expected_H = tuple(sorted(G))
        elems = sorted(g for g in G if g != (1, 2, 3, 4))
        pres = {
            "all": [_lift(g, 4) for g in elems],
            "pair": [_lift(a, 4), _lift(b, 4)],
        }
        extra = [src.choice(elems) for _ in range(2)] if elems else []
        red = [_lift(a, 4), _lift(b, 4)] + [_lift(g, 4) for g in extra] + [_lift(a, 4) * _lift(b, 4)]
        pres["redundant"] = red
        outs = {}
        for name, gens in pres.items():
            spec = OpenSubgroupSpec(S, tuple(gens), frozenset(range(1, 5)))
            try:
                outs[name] = canonicalize_open_subgroup(spec, n)
            except Hilbert90Error as exc:
                t.check(False, f"|H|={len(G)} {name}: {exc}")
        if wide and (level is None or level >= 11):
            gens = [_lift(a, 6), _lift(b, 6), FinPermutation.transposition(5, 6, 6)]
            spec = OpenSubgroupSpec(frozenset(range(1, 6)), tuple(gens), frozenset(range(1, 7)))
            try:
                outs["wide"] = canonicalize_open_subgroup(spec, 11)
            except Hilbert90Error as exc:
                t.check(False, f"|H|={len(G)} wide: {exc}")
        for name, c in outs.items():
            t.check(c.T == (1, 2, 3, 4) and c.H == expected_H, f"|H|={len(G)} {name}: got {c.to_json()}")
        t.check(len({c.dumps() for c in outs.values()}) <= 1, f"|H|={len(G)}: presentations disagree")
    return CheckResult(3, "open-subgroup-canonicalization", not t.failures and len(groups) == 30,
                       f"{len(groups)} subgroups of S_4, {t.count} comparisons, minimality verified at n={n}",
                       failures=t.failures)


# -- 4 ------------------------------------------------------------------------

def check_growth(level: int | None = None, seed: int = 0) -> CheckResult:
    top = _cap(8, level)
    t = _Tally()
    for q in (1, 2, 3):
        for N in range(top + 1):
            for n in range(N + 1):
                got = embedding_count(GrowthParams(q), n, N)
                t.check(got == brute_force_embedding_count(q, n, N), f"q={q} n={n} N={N}")
                if q == 1:
                    t.check(got == perm(N, n), f"falling factorial n={n} N={N}")
    return CheckResult(4, "growth", not t.failures,
                       f"{t.count} counts match enumeration for N <= {top}, q in 1,2,3", failures=t.failures)


# -- 5 ------------------------------------------------------------------------

def check_tensor_power(level: int | None = None, seed: int = 0) -> CheckResult:
    t = _Tally()
    for N in range(9):
        a = binomial_basis_coeffs(N)
        for m in range(N + 1):
            t.check(sum(a[i] * comb(m, i) for i in range(N + 1)) == m ** N, f"N={N} m={m}")
        if N <= 6:
            for i in range(N + 1):
                s = surjection_count(N, i)
                t.check(a[i] == s and s == factorial(i) * set_partition_count(N, i), f"a_{i},{N}")
    ranks = []
    for N in range(4):
        for n in range(N + 1, N + 4):
            if level is not None and n > level:
                continue
            am = alpha_map_matrix(N, n)
            r = am.rank()
            ranks.append((N, n, r))
            t.check(r == am.matrix.nrows == am.matrix.ncols, f"alpha N={N} n={n}: rank {r}")
    return CheckResult(5, "tensor-power", not t.failures,
                       f"{t.count} identities; {len(ranks)} alpha matrices at exact full rank", failures=t.failures)


# -- 6 ------------------------------------------------------------------------

def check_product(level: int | None = None, seed: int = 0) -> CheckResult:
    t = _Tally()
    for a in range(5):
        for b in range(5):
            kappa = product_decompose(a, b)
            for n in range(_cap(10, level) + 1):
                t.check(comb(n, a) * comb(n, b) == kappa.dimension(n), f"dim a={a} b={b} n={n}")
    for a in range(4):
        for b in range(4):
            for n in range(a + b, _cap(6, level) + 1):
                t.check(product_orbit_multiplicities(a, b, n) == product_decompose(a, b), f"orbits a={a} b={b} n={n}")
    return CheckResult(6, "product-decomposition", not t.failures, f"{t.count} identities", failures=t.failures)


# -- 7 ------------------------------------------------------------------------

def check_omega(level: int | None = None, seed: int = 0) -> CheckResult:
    t = _Tally()
    for N in range(4):
        for n in range(max(N, 1), _cap(5, level) + 1):
            t.check(omega_iso_check(N, n), f"N={N} n={n}")
    return CheckResult(7, "differential-forms", not t.failures, f"{t.count} (N, n) pairs equivariant",
                       failures=t.failures)


# -- 8 ------------------------------------------------------------------------

def _grading_instance(i: int, n: int, src: SeededSource, t: _Tally) -> None:
    f = random_ratfunc(n, src, num_deg=3, den_deg=2)
    g = random_ratfunc(n, src, num_deg=2, den_deg=2)
    vf, vg = degree_valuation(f), degree_valuation(g)
    t.check(degree_valuation(f * g) == vf + vg, f"#{i} v(fg)")
    s = f + g
    if s:
        t.check(degree_valuation(s) >= min(vf, vg), f"#{i} v(f+g)")
    # reconstruction for -3 <= v(f) <= 0
    if -3 <= vf <= 0:
        total = RatFunc.zero(n)
        for d in range(3, -6, -1):
            total = total + project_degree(f, d).value
        rest = f - total
        t.check(rest.is_zero() or degree_valuation(rest) > 5, f"#{i} reconstruction")
    d = -vf - (i % 3)
    sl = project_degree(f, d)
    t.check(project_degree(sl.value, d).value == sl.value, f"#{i} idempotence")
    t.check(project_degree(sl.value, d + 1).is_zero() and project_degree(sl.value, d - 1).is_zero(),
            f"#{i} other degrees vanish")
    for k in range(1, n):
        p = adjacent_transposition(k, n)
        t.check(project_degree(apply_permutation(p, f), d).value == apply_permutation(p, sl.value),
                f"#{i} equivariance s_{k}")
    if n >= 2 and i % 10 == 0:
        c = RatFunc.variable(1, n) / RatFunc.variable(2, n)
        t.guard(f"#{i} V_0-linearity", lambda: check_v0_linearity(f, g, c, d))


def check_grading(level: int | None = None, seed: int = 0) -> CheckResult:
    src = SeededSource(seed).spawn(8)
    t = _Tally()
    top = _cap(4, level)
    for i in range(200):
        n = 1 + i % top
        _grading_instance(i, n, src, t)
    return CheckResult(8, "grading", not t.failures, f"{t.count} properties over 200 instances, n <= {top}",
                       failures=t.failures)


# -- 9 ------------------------------------------------------------------------

def check_squares(level: int | None = None, seed: int = 0) -> CheckResult:
    src = SeededSource(seed).spawn(9)
    t = _Tally()
    top = _cap(4, level)
    for i in range(100):
        n = 1 + i % top
        k = min(n, 1 + i % 3)
        dv = sorted(src.sample(range(1, n + 1), k))
        f = random_ratfunc(n, src, num_deg=3, den_deg=2, den_vars=dv)
        parts = square_subfield_decompose(f)
        t.check(squares_resum(parts, n) == f, f"#{i} resum")
        t.check(all(has_even_parity(c) for c in parts.values()), f"#{i} parity")
        for j in range(1, n):
            p = adjacent_transposition(j, n)
            moved = square_subfield_decompose(apply_permutation(p, f))
            want = {tuple(sorted(p(s) for s in S)): apply_permutation(p, c) for S, c in parts.items()}
            t.check(moved == want, f"#{i} equivariance s_{j}")
    return CheckResult(9, "squares-decomposition", not t.failures, f"{t.count} properties over 100 instances",
                       failures=t.failures)


# -- 10 -----------------------------------------------------------------------

def check_unipotent(level: int | None = None, seed: int = 0, per_partition: int = 20) -> CheckResult:
    src = SeededSource(seed).spawn(10)
    t = _Tally()
    top = _cap(4, level)
    for sizes in PARTITIONS_UP_TO_4:
        for r in range(per_partition):
            n = max(2, 3 + r % 2 if top >= 4 else top)
            dm, _ = conjugated_standard_sum(sizes, n, src)

            def run():
                c = classify_module(dm, seed=seed + r, certify=False)
                return list(c.jordan) == sorted(sizes, reverse=True) and c.family.homomorphism_holds()
            t.guard(f"{list(sizes)} #{r} (n={n})", run)
    return CheckResult(10, "unipotent-classification", not t.failures,
                       f"{t.count - len(t.failures)}/{t.count} conjugated sums classified, homomorphism law exact",
                       failures=t.failures)


# -- 11 -----------------------------------------------------------------------

def check_partial_fractions(level: int | None = None, seed: int = 0) -> CheckResult:
    src = SeededSource(seed).spawn(11)
    t = _Tally()
    for i in range(100):
        m = 1 + i % 3
        num, factors = random_partial_fraction_instance(m, src, max_deg=4)

        def run():
            pf = partial_fractions(num, factors)
            if pf.reconstruct_numerator(factors) != num:
                return False
            if any(P.degree >= Q.degree for Q, _, P in pf.terms):
                return False
            den = RatFunc.one(m + 1)
            for Q, k in factors:
                den = den * Q.to_ratfunc() ** k
            return pf.to_ratfunc() == num.to_ratfunc() / den
        t.guard(f"#{i}", run)
    return CheckResult(11, "partial-fractions", not t.failures,
                       f"{t.count - len(t.failures)}/{t.count} decompositions resum exactly", failures=t.failures)


CRITERIA: list[Callable[..., CheckResult]] = [
    check_hilbert90,
    check_strong_generation,
    check_canonicalization,
    check_growth,
    check_tensor_power,
    check_product,
    check_omega,
    check_grading,
    check_squares,
    check_unipotent,
    check_partial_fractions,
]


def run_check(fn: Callable[..., CheckResult], level: int | None = None, seed: int = 0) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = fn(level=level, seed=seed)
    except Hilbert90Error as exc:
        idx = CRITERIA.index(fn) + 1 if fn in CRITERIA else 0
        res = CheckResult(idx, fn.__name__, False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_all(level: int | None = None, seed: int = 0) -> list[CheckResult]:
    return [run_check(fn, level, seed) for fn in CRITERIA]
