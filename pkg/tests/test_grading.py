import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from hilbert90.errors import DomainError, ResourceError
from hilbert90.exactfield import RatFunc, adjacent_transposition, apply_permutation
from hilbert90.grading import (
    check_v0_linearity,
    degree_valuation,
    graded_expansion,
    has_even_parity,
    is_homogeneous_of_degree,
    project_degree,
    square_subfield_decompose,
    squares_resum,
)

from strategies import level_and, nonzero_ratfuncs, permutations, ratfuncs

X = sympy.symbols("x1:7")
u = sympy.Symbol("u")


def R(text, n=None):
    return RatFunc.parse(text, n)


def to_sympy(f):
    return sympy.sympify(str(f).replace("^", "**"), locals={f"x{i + 1}": X[i] for i in range(6)})


def slice_by_series(f, d, n):
    """Coefficient of ``u^-d`` in ``f(x/u)`` around ``u = 0``."""
    g = to_sympy(f).subs({X[i]: X[i] / u for i in range(n)}, simultaneous=True)
    order = -d + 1
    ser = sympy.series(g, u, 0, order).removeO()
    return sympy.expand(ser).coeff(u, -d)


# -- valuation --------------------------------------------------------------------

def test_valuation_examples():
    assert degree_valuation(R("x1")) == -1
    assert degree_valuation(R("(x1 + x2)/x3")) == 0
    assert degree_valuation(R("1/(x1*x2 + x3)")) == 2


def test_valuation_of_zero_is_undefined():
    with pytest.raises(DomainError):
        degree_valuation(RatFunc.zero(2))


@given(level_and(lambda n: st.tuples(nonzero_ratfuncs(n), nonzero_ratfuncs(n)), 1, 3))
def test_valuation_axioms(data):
    _, (f, g) = data
    assert degree_valuation(f * g) == degree_valuation(f) + degree_valuation(g)
    if not (f + g).is_zero():
        assert degree_valuation(f + g) >= min(degree_valuation(f), degree_valuation(g))


@given(level_and(lambda n: st.tuples(nonzero_ratfuncs(n), permutations(n)), 1, 4))
def test_valuation_is_invariant(data):
    _, (f, p) = data
    assert degree_valuation(apply_permutation(p, f)) == degree_valuation(f)


# -- project_degree --------------------------------------------------------------------

def test_polynomial_grading():
    f = R("x1 + x2^2")
    assert project_degree(f, 2).value == R("x2^2", 2)
    assert project_degree(f, 1).value == R("x1", 2)
    assert project_degree(f, 0).is_zero()


def test_homogeneous_input_is_its_own_slice():
    f = R("1/(x1 - x2)")
    assert project_degree(f, -1).value == f


def test_geometric_series_slice():
    f = R("1/(1 + x1)")
    assert project_degree(f, -2).value == R("-1/x1^2")
    # oracle: 1/x1 - 1/x1^2 + 1/x1^3 - ... to five terms
    for k in range(1, 6):
        assert to_sympy(project_degree(f, -k).value) == sympy.Integer(-1) ** (k + 1) / X[0] ** k


def test_zero_input_gives_zero_slice():
    assert project_degree(RatFunc.zero(2), 3).is_zero()


def test_slice_json():
    assert project_degree(R("1/(1 + x1)"), -2).to_json() == {"degree": -2, "value": "-1/x1^2"}


@pytest.mark.parametrize("text,n", [("(x1 + 1)/(x1^2 + x2)", 2), ("x1/(x1 - x2 + 3)", 2),
                                    ("(x1*x2 + x3)/(x3^2 + x1 + 1)", 3), ("1/(x1 + x2^2)", 2)])
def test_slices_match_sympy_series(text, n):
    f = R(text, n)
    top = -degree_valuation(f)
    for d in range(top, top - 4, -1):
        got = to_sympy(project_degree(f, d).value)
        assert sympy.cancel(got - slice_by_series(f, d, n)) == 0


@given(level_and(nonzero_ratfuncs, 1, 3), st.integers(-4, 2))
def test_slices_are_homogeneous_and_idempotent(data, d):
    _, f = data
    sl = project_degree(f, d)
    assert is_homogeneous_of_degree(sl.value, d)
    assert project_degree(sl.value, d).value == sl.value
    for e in (d - 1, d + 1):
        assert project_degree(sl.value, e).is_zero()


@settings(max_examples=25)
@given(level_and(lambda n: st.tuples(ratfuncs(n, 1), nonzero_ratfuncs(n, 1)), 1, 3))
def test_reconstruction_leaves_a_high_valuation_remainder(data):
    _, (a, b) = data
    f = a / b
    assume(not f.is_zero() and -3 <= degree_valuation(f) <= 0)
    total = sum((s.value for s in graded_expansion(f, 3, -5)), RatFunc.zero(f.nvars))
    rest = f - total
    assert rest.is_zero() or degree_valuation(rest) > 5


@given(level_and(lambda n: st.tuples(nonzero_ratfuncs(n), st.integers(1, max(1, n - 1))), 2, 4),
       st.integers(-3, 2))
def test_projection_commutes_with_transpositions(data, d):
    n, (f, i) = data
    s = adjacent_transposition(i, n)
    assert project_degree(apply_permutation(s, f), d).value == apply_permutation(s, project_degree(f, d).value)


# -- V_0-linearity ------------------------------------------------------------------------

def test_v0_linearity_examples():
    f, g = R("x1^2 + x2", 2), R("x1*x2 + 1", 2)
    for d in range(-1, 3):
        assert check_v0_linearity(f, g, R("x1/x2", 2), d)
        assert check_v0_linearity(f, g, RatFunc.one(2), d)
    h = R("x1/(x1 + x2)", 2)
    assert project_degree(h, 0).value == h


@given(level_and(lambda n: st.tuples(nonzero_ratfuncs(n, 1), nonzero_ratfuncs(n, 1)), 2, 3), st.integers(-2, 1))
def test_v0_linearity_holds(data, d):
    _, (f, g) = data
    assert check_v0_linearity(f, g, R("(x1 + x2)/(x1 - 2*x2)", f.nvars), d)


def test_v0_linearity_needs_degree_zero_scalar():
    with pytest.raises(DomainError):
        check_v0_linearity(R("x1", 2), R("x2", 2), R("x1", 2), 0)


# -- squares subfield ------------------------------------------------------------------

def test_squares_examples():
    assert square_subfield_decompose(R("x1 + x2^2")) == {(): R("x2^2", 2), (1,): RatFunc.one(2)}
    assert square_subfield_decompose(R("1/x1")) == {(1,): R("1/x1^2")}
    assert square_subfield_decompose(R("x1*x2 + 1")) == {(): RatFunc.one(2), (1, 2): RatFunc.one(2)}


def test_squares_have_sympy_parity():
    f = R("(x1 + 2*x2)/(x1 - x2 + x3)", 3)
    parts = square_subfield_decompose(f)
    for S, c in parts.items():
        e = to_sympy(c)
        # even in every variable: invariant under each sign flip
        for i in range(3):
            assert sympy.cancel(e.subs(X[i], -X[i]) - e) == 0
    assert squares_resum(parts, 3) == f


def test_too_many_denominator_variables():
    den = " + ".join(f"x{i}" for i in range(1, 14))
    with pytest.raises(ResourceError):
        square_subfield_decompose(R(f"1/({den})", 13))


@settings(max_examples=25)
@given(level_and(lambda n: ratfuncs(n, 1), 1, 3))
def test_squares_resum_and_parity(data):
    n, f = data
    parts = square_subfield_decompose(f)
    assert squares_resum(parts, n) == f
    assert all(has_even_parity(c) for c in parts.values())


@settings(max_examples=25)
@given(level_and(lambda n: st.tuples(ratfuncs(n, 1), permutations(n)), 2, 3))
def test_squares_supports_are_equivariant(data):
    n, (f, p) = data
    parts = square_subfield_decompose(f)
    moved = square_subfield_decompose(apply_permutation(p, f))
    expect = {tuple(sorted(p(t) for t in S)): apply_permutation(p, c) for S, c in parts.items()}
    assert moved == expect


def test_uniqueness_on_a_known_decomposition():
    # any decomposition with square-field coefficients agrees with ours
    n = 2
    c0, c1 = R("x1^2/(x2^2 + 1)", n), R("1/(x1^2 - x2^2)", n)
    f = c0 + c1 * R("x1*x2", n)
    got = square_subfield_decompose(f)
    assert set(got) == {(), (1, 2)}
    assert got[()] == c0 and got[(1, 2)] == c1
