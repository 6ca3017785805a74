import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hilbert90.errors import DimensionError, DomainError, ResourceError
from hilbert90.exactfield import FinPermutation, RatFunc, is_fixed_by
from hilbert90.linalg import Matrix
from hilbert90.rng import SeededSource
from hilbert90.samples import random_coboundary_phi
from hilbert90.semilin import (
    CocycleModule,
    TrivializationWitness,
    check_eigen_independence,
    coboundary_from,
    conjugate_module,
    direct_sum,
    relation_failures,
    speiser_trivialize,
    swap,
    tensor_product,
    validate_cocycle,
    witness_ambiguity_fixed,
    witness_holds,
)

from strategies import seeds

X = sympy.symbols("x1:7")


def M(rows, n):
    return Matrix.from_strings(rows, n)


def one_by_one(text, n=2):
    return CocycleModule(n, 1, [M([[text]], n)] * (n - 1))


def sym_matrix(m, n):
    loc = {f"x{i + 1}": X[i] for i in range(n)}
    return sympy.Matrix([[sympy.sympify(str(e).replace("^", "**"), locals=loc) for e in row] for row in m.to_strings()])


# -- validate_cocycle ----------------------------------------------------------

def test_trivial_module_is_valid():
    assert validate_cocycle(CocycleModule.trivial(3, 4))


def test_quotient_cocycle_is_valid():
    assert validate_cocycle(one_by_one("x1/x2"))


def test_involution_failure():
    m = one_by_one("x1")
    assert not validate_cocycle(m)
    assert relation_failures(m) == ["involution s1"]


def test_braid_failure_is_named():
    # each generator is an involution on its own, but the braid relation fails
    n = 3
    m = CocycleModule(n, 1, [M([["x1/x2"]], n), M([["-1"]], n)])
    assert "braid s1 s2" in relation_failures(m)


def test_singular_generator_is_rejected():
    m = CocycleModule(2, 2, [M([["1", "x1"], ["1", "x1"]], 2)])
    with pytest.raises(DomainError, match="singular"):
        validate_cocycle(m)


def test_wrong_shape_is_a_dimension_error():
    with pytest.raises(DimensionError):
        CocycleModule(3, 2, [Matrix.identity(2, 3)])


# -- coboundary_from -------------------------------------------------------------

def test_identity_gives_trivial_module():
    assert coboundary_from(Matrix.identity(2, 3)) == CocycleModule.trivial(2, 3)


def test_diagonal_x1():
    assert coboundary_from(M([["x1"]], 2)).f(1) == M([["x1/x2"]], 2)


def test_unipotent_2x2():
    m = coboundary_from(M([["1", "x1"], ["0", "1"]], 2))
    assert m.f(1) == M([["1", "x1 - x2"], ["0", "1"]], 2)


def test_singular_phi_is_rejected():
    with pytest.raises(DomainError):
        coboundary_from(M([["x1", "x2"], ["x1", "x2"]], 2))


@settings(max_examples=15)
@given(seeds, st.integers(1, 3), st.integers(2, 4))
def test_coboundary_matches_sympy_and_validates(seed, N, n):
    phi = random_coboundary_phi(N, n, SeededSource(seed))
    m = coboundary_from(phi)
    assert validate_cocycle(m)
    P = sym_matrix(phi, n)
    for i in range(1, n):
        swapped = P.subs({X[i - 1]: X[i], X[i]: X[i - 1]}, simultaneous=True)
        want = P * swapped.inv()
        assert (sym_matrix(m.f(i), n) - want).applyfunc(sympy.cancel) == sympy.zeros(N, N)


# -- cocycle extension ------------------------------------------------------------

def _inversions(p):
    im = p.images
    return sum(1 for a, b in itertools.combinations(range(len(im)), 2) if im[a] > im[b])


def _reduced_words(p):
    """All reduced words for ``p`` as lists of adjacent-transposition indices."""
    n = len(p.images)
    if p.is_identity():
        return [[]]
    out = []
    for i in range(1, n):
        q = swap(i, n) * p
        if _inversions(q) < _inversions(p):
            out += [[i] + w for w in _reduced_words(q)]
    return out


def test_cocycle_value_is_independent_of_the_reduced_word():
    n = 4
    phi = random_coboundary_phi(2, n, SeededSource(11))
    m = coboundary_from(phi)
    table = m.cocycle_table()
    checked = 0
    for images in itertools.permutations(range(1, n + 1)):
        p = FinPermutation(images)
        words = _reduced_words(p)
        # compare the first, the last and a middle word
        for w in {0, len(words) // 2, len(words) - 1}:
            assert m.cocycle_value(words[w]) == table[images]
        checked += 1
    assert checked == 24


def test_cocycle_rule_on_coboundaries():
    # f_sigma = phi sigma(phi)^{-1} for every sigma, from the table
    n = 3
    phi = M([["x1", "x2"], ["0", "1"]], n)
    m = coboundary_from(phi)
    inv = phi.inverse()
    for images, f in m.cocycle_table().items():
        assert f == phi * inv.act(FinPermutation(images))


# -- speiser_trivialize -------------------------------------------------------------

def test_trivial_module_gets_identity_witness():
    w = speiser_trivialize(CocycleModule.trivial(2, 3))
    assert w.phi.is_identity()


def test_rank_one_quotient_gives_multiple_of_x1():
    n = 2
    w = speiser_trivialize(one_by_one("x1/x2"), seed=5)
    c = w.phi[0, 0] / RatFunc.parse("x1", n)
    assert not c.is_zero()
    assert is_fixed_by(c, [swap(1, n)])


@settings(max_examples=12)
@given(seeds, st.integers(1, 3), st.integers(2, 4))
def test_round_trip_gives_a_valid_witness(seed, N, n):
    src = SeededSource(seed)
    m = coboundary_from(random_coboundary_phi(N, n, src))
    w = speiser_trivialize(m, seed=seed)
    assert witness_holds(m, w.phi)
    assert w.phi.is_invertible()


def test_speiser_is_deterministic():
    m = coboundary_from(random_coboundary_phi(2, 3, SeededSource(3)))
    assert speiser_trivialize(m, seed=9).phi == speiser_trivialize(m, seed=9).phi


def test_invalid_cocycle_is_rejected():
    with pytest.raises(DomainError, match="not a cocycle"):
        speiser_trivialize(one_by_one("x1"))


def test_level_cap():
    with pytest.raises(ResourceError):
        speiser_trivialize(one_by_one("x1/x2", 7))


def test_witness_json_round_trip():
    m = one_by_one("x1/x2")
    w = speiser_trivialize(m, seed=1)
    assert TrivializationWitness.from_json(w.to_json(), 2).phi == w.phi


def test_witness_ambiguity_is_an_invariant_matrix():
    m = coboundary_from(random_coboundary_phi(2, 3, SeededSource(21)))
    w1 = speiser_trivialize(m, seed=1).phi
    w2 = speiser_trivialize(m, seed=2).phi
    assert witness_ambiguity_fixed(w1, w2)
    # a non-invariant change of basis breaks it
    w3 = w1 * M([["x1", "0"], ["0", "1"]], 3)
    assert not witness_ambiguity_fixed(w1, w3)
    assert not witness_holds(m, w3)


# -- eigenvector independence ---------------------------------------------------------

def test_single_vector_is_independent():
    m = CocycleModule.trivial(2, 2)
    assert check_eigen_independence([["x1 + x2", "1"]], m, [1]).status == "independent"


def test_standard_basis_in_trivial_module():
    m = CocycleModule.trivial(2, 2)
    r = check_eigen_independence([[1, 0], [0, 1]], m, [1])
    assert r.status == "independent" and r.k_rank == 2


def test_invariant_multiple_is_not_applicable():
    m = CocycleModule.trivial(2, 2)
    r = check_eigen_independence([[1, 0], ["x1 + x2", 0]], m, [1])
    assert r.status.startswith("not applicable")
    assert r  # not violated


def test_sign_character_eigenvectors():
    n = 3
    m = CocycleModule.trivial(1, n)
    v = [[str(sympy.expand((X[0] - X[1]) * (X[0] - X[2]) * (X[1] - X[2]))).replace("**", "^")]]
    assert check_eigen_independence(v, m, [-1, -1]).status == "independent"


def test_non_eigenvector_names_the_generator():
    m = CocycleModule.trivial(1, 3)
    with pytest.raises(DomainError, match="s2"):
        check_eigen_independence([["x3"]], m, [1, 1])


@settings(max_examples=10)
@given(seeds)
def test_never_violated_on_invariant_combinations(seed):
    src = SeededSource(seed)
    n = 3
    phi = random_coboundary_phi(2, n, src)
    m = coboundary_from(phi)
    # columns of phi are fixed vectors; add an invariant-field combination
    cols = [[phi[r, c] for r in range(2)] for c in range(2)]
    e1 = RatFunc.parse("x1 + x2 + x3", n)
    combo = [cols[0][r] + e1 * cols[1][r] for r in range(2)]
    assert check_eigen_independence(cols, m, [1, 1]).status == "independent"
    r = check_eigen_independence(cols + [combo], m, [1, 1])
    assert r.status.startswith("not applicable")


# -- constructions ------------------------------------------------------------------

def test_direct_sum_of_trivials():
    assert direct_sum(CocycleModule.trivial(1, 3), CocycleModule.trivial(1, 3)) == CocycleModule.trivial(2, 3)


def test_tensor_rank_and_coboundary():
    n = 3
    p1 = M([["x1", "1"], ["0", "1"]], n)
    p2 = M([["1", "x2"], ["0", "x3"]], n)
    t = tensor_product(coboundary_from(p1), coboundary_from(p2))
    assert t.rank == 4
    assert t == coboundary_from(p1.kron(p2))
    assert validate_cocycle(t)


def test_level_mismatch():
    with pytest.raises(DimensionError):
        direct_sum(CocycleModule.trivial(1, 2), CocycleModule.trivial(1, 3))


def test_conjugating_a_coboundary_moves_its_witness():
    n = 3
    phi = M([["x1", "1"], ["0", "1"]], n)
    C = M([["1", "x1 - x2"], ["0", "1"]], n)
    m2 = conjugate_module(coboundary_from(phi), C)
    assert witness_holds(m2, C.inverse() * phi)


def test_module_json_round_trip():
    m = coboundary_from(M([["1", "x1"], ["0", "1"]], 3))
    assert CocycleModule.from_json(m.to_json()) == m
    # omitted generators default to the identity
    d = {"level": 3, "rank": 1, "gens": [{"swap": 1, "matrix": [["x1/x2"]]}]}
    assert CocycleModule.from_json(d).f(2).is_identity()
