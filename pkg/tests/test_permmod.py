import itertools
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.functions.combinatorial.numbers import stirling

from hilbert90.errors import DomainError
from hilbert90.exactfield import RatFunc
from hilbert90.permmod import (
    PermModuleExpr,
    alpha_equivariant,
    alpha_map_matrix,
    artin_basis,
    binomial_basis_coeffs,
    hom_orbit_count,
    hom_orbit_count_bruteforce,
    omega_iso_check,
    product_decompose,
    product_orbit_multiplicities,
    set_partition_count,
    split_matrix,
    surjection_count,
    tensor_power_report,
)
from hilbert90.linalg import rank_specialized
from hilbert90.rng import SeededSource


def R(text, n):
    return RatFunc.parse(text, n)


# -- product_decompose ------------------------------------------------------------

def test_product_of_two_points():
    k = product_decompose(1, 1)
    assert k.kappa == {1: 1, 2: 2}
    assert 3 * 3 == k.dimension(3)


def test_product_with_empty_set_is_the_unit():
    for s in range(5):
        assert product_decompose(0, s).kappa == {s: 1}


def test_product_one_two():
    k = product_decompose(1, 2)
    assert k.kappa == {2: 2, 3: 3}
    assert 4 * 6 == k.dimension(4)


def test_negative_sizes_are_rejected():
    with pytest.raises(DomainError):
        product_decompose(-1, 2)


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3)])
def test_product_matches_orbit_enumeration(a, b):
    for n in range(a + b, 7):
        assert product_orbit_multiplicities(a, b, n) == product_decompose(a, b)


def _orbit_count_by_itertools(a, b, n):
    # S_n-orbits on pairs (A, B) are determined by |A ∩ B|; count pairs per intersection size
    out = {}
    for A in itertools.combinations(range(n), a):
        for B in itertools.combinations(range(n), b):
            j = len(set(A) & set(B))
            out[j] = out.get(j, 0) + 1
    return out


@pytest.mark.parametrize("a,b", [(1, 2), (2, 2), (2, 3)])
def test_multiplicity_is_pair_count_over_subset_count(a, b):
    n = a + b + 1
    pairs = _orbit_count_by_itertools(a, b, n)
    k = product_decompose(a, b)
    for j, cnt in pairs.items():
        assert cnt == k.kappa[a + b - j] * comb(n, a + b - j)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 10))
def test_dimension_identity(a, b, n):
    k = product_decompose(a, b)
    assert comb(n, a) * comb(n, b) == k.dimension(n)


def test_perm_module_json_round_trip():
    k = product_decompose(2, 2)
    assert PermModuleExpr.from_json(k.to_json()) == k
    assert k.level == 4
    with pytest.raises(DomainError):
        PermModuleExpr({1: -1})


# -- split_matrix ------------------------------------------------------------------

def test_split_two_points():
    r = split_matrix({1, 2}, [R("1", 2), R("x1", 2)], 2)
    assert r.matrix.to_strings() == [["1", "x1"], ["1", "x2"]]
    assert r.det == R("x2 - x1", 2)
    assert r.report == "isomorphism"


def test_split_index_one():
    r = split_matrix({1}, [R("1", 3)], 3)
    assert r.det.is_one()


def test_split_symmetric_element_is_not_a_basis():
    r = split_matrix({1, 2}, [R("1", 2), R("x1 + x2", 2)], 2)
    assert r.det.is_zero() and r.report == "not a basis"


def test_split_rejects_elements_not_fixed_by_the_stabilizer():
    with pytest.raises(DomainError, match="not fixed"):
        split_matrix({1, 2}, [R("1", 4), R("x3", 4)], 4)


def test_split_wrong_basis_size():
    with pytest.raises(DomainError):
        split_matrix({1, 2}, [R("1", 2)], 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_artin_basis_gives_an_isomorphism(k):
    T = set(range(1, k + 1))
    r = split_matrix(T, artin_basis(T, k + 1), k + 1)
    assert r.is_basis
    # for k = 2 the determinant is a Vandermonde factor; compare with sympy in general
    x = sympy.symbols(f"x1:{k + 2}")
    M = sympy.Matrix([[sympy.sympify(e.replace("^", "**"), locals={f"x{i + 1}": x[i] for i in range(k + 1)})
                       for e in row] for row in r.matrix.to_strings()])
    assert sympy.expand(M.det() - sympy.sympify(str(r.det).replace("^", "**"),
                                                locals={f"x{i + 1}": x[i] for i in range(k + 1)})) == 0


# -- binomial coefficients of t^N -------------------------------------------------------

def test_binomial_basis_examples():
    assert binomial_basis_coeffs(0) == [1]
    assert binomial_basis_coeffs(1) == [0, 1]
    assert binomial_basis_coeffs(3) == [0, 1, 6, 6]


@pytest.mark.parametrize("N", range(9))
def test_binomial_basis_is_an_identity_of_polynomials(N):
    t = sympy.Symbol("t")
    a = binomial_basis_coeffs(N)
    total = sum(c * sympy.binomial(t, i) for i, c in enumerate(a))
    assert sympy.expand(sympy.expand_func(total) - t ** N) == 0
    for m in range(N + 1):
        assert sum(c * comb(m, i) for i, c in enumerate(a)) == m ** N
    assert all(c >= 0 for c in a)


@pytest.mark.parametrize("N", range(7))
def test_coefficients_count_surjections(N):
    a = binomial_basis_coeffs(N)
    for i in range(N + 1):
        assert a[i] == surjection_count(N, i)
        assert a[i] == factorial(i) * set_partition_count(N, i)
        assert set_partition_count(N, i) == stirling(N, i)


def test_negative_power_is_rejected():
    with pytest.raises(DomainError):
        binomial_basis_coeffs(-1)


# -- alpha ---------------------------------------------------------------------------

def test_alpha_small_cases():
    am = alpha_map_matrix(1, 2)
    assert am.matrix.nrows == am.matrix.ncols == 4 and am.is_bijective()
    am0 = alpha_map_matrix(0, 3)
    assert am0.is_bijective()
    am2 = alpha_map_matrix(2, 4)
    assert am2.matrix.nrows == 24 and am2.is_bijective()


@pytest.mark.parametrize("N,n", [(N, n) for N in range(3) for n in range(N + 1, N + 4)] + [(3, 4), (3, 5)])
def test_alpha_full_rank_and_equivariant(N, n):
    am = alpha_map_matrix(N, n)
    assert N * comb(n, N) + (N + 1) * comb(n, N + 1) == comb(n, N) * n == am.matrix.nrows
    assert am.is_bijective()
    assert alpha_equivariant(am)


def test_alpha_level_precondition():
    with pytest.raises(DomainError):
        alpha_map_matrix(2, 2)


@given(st.integers(0, 2 ** 32 - 1))
def test_specialized_rank_never_exceeds_exact_rank(seed):
    am = alpha_map_matrix(1, 3)
    assert rank_specialized(am.matrix, SeededSource(seed)) <= am.matrix.nrows


def test_tensor_power_report():
    rep = tensor_power_report(3, 4)
    assert rep["a"] == [0, 1, 6, 6]
    assert rep["decomposition"] == {"kappa": {"1": 1, "2": 6, "3": 6}}
    assert [s["index"] for s in rep["alpha"]] == [0, 1, 2]
    assert all(s["bijective"] for s in rep["alpha"])


# -- differential forms ------------------------------------------------------------------

@pytest.mark.parametrize("N,n", [(0, 3), (1, 3), (1, 5), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)])
def test_omega_isomorphism(N, n):
    assert omega_iso_check(N, n)


def test_omega_level_precondition():
    with pytest.raises(DomainError):
        omega_iso_check(4, 3)


# -- Hom orbits ------------------------------------------------------------------------

def test_hom_orbit_examples():
    assert hom_orbit_count(1, 2, 4) == 2
    assert all(hom_orbit_count(0, t, 5) == 1 for t in range(6))
    assert hom_orbit_count(2, 2, 3) == 2


@pytest.mark.parametrize("n", range(0, 8))
def test_hom_orbits_match_enumeration(n):
    for s in range(min(3, n) + 1):
        for t in range(min(3, n) + 1):
            assert hom_orbit_count(s, t, n) == hom_orbit_count_bruteforce(s, t, n)
