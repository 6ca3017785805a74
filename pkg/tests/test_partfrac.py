import pytest
import sympy
from hypothesis import given, settings

from hilbert90.errors import DimensionError, DomainError
from hilbert90.exactfield import RatFunc
from hilbert90.partfrac import TPoly, partial_fractions
from hilbert90.rng import SeededSource
from hilbert90.samples import random_partial_fraction_instance

from strategies import seeds

x1, x2, x3, t = sympy.symbols("x1 x2 x3 t")


def T(coeffs, m=2):
    return TPoly(coeffs, m)


def to_sympy(f, m):
    # RatFunc at level m + 1 with t = x_{m+1}
    loc = {f"x{i + 1}": sympy.Symbol(f"x{i + 1}") for i in range(m)}
    loc[f"x{m + 1}"] = t
    return sympy.sympify(str(f).replace("^", "**"), locals=loc)


# -- TPoly ------------------------------------------------------------------------

def test_tpoly_round_trip_through_ratfunc():
    p = T(["x1", "0", "x2/x1", "1"])
    f = p.to_ratfunc()
    assert f.nvars == 3
    assert TPoly.from_ratfunc(f, 3) == p


def test_tpoly_division_identity():
    a = T(["x1", "1", "0", "x2", "1"])
    b = T(["x2", "1"])
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_tpoly_xgcd():
    a = T(["-x1", "1"]) * T(["-x2", "1"])
    b = T(["-x1", "1"]) * T(["1", "1"])
    g, u, v = a.xgcd(b)
    assert g.monic() == T(["-x1", "1"])
    assert u * a + v * b == g


def test_t_must_be_last():
    with pytest.raises(DimensionError):
        TPoly.from_ratfunc(RatFunc.parse("x1 + x2", 2), 1)


# -- examples ------------------------------------------------------------------------

def test_two_linear_factors():
    Q1, Q2 = T(["-x1", "1"]), T(["-x2", "1"])
    pf = partial_fractions(T([1]), [(Q1, 1), (Q2, 1)])
    assert pf.polynomial_part.is_zero()
    got = {(Q.coeffs, m): P for Q, m, P in pf.terms}
    assert got[(Q1.coeffs, 1)] == T(["1/(x1 - x2)"])
    assert got[(Q2.coeffs, 1)] == T(["1/(x2 - x1)"])


def test_polynomial_input_has_only_a_polynomial_part():
    pf = partial_fractions(T(["x1", "0", "1"]), [])
    assert pf.terms == ()
    assert pf.polynomial_part == T(["x1", "0", "1"])


def test_repeated_factor():
    Q = T(["-x1", "1"])
    pf = partial_fractions(T(["1", "1"]), [(Q, 2)])
    got = {m: P for _, m, P in pf.terms}
    assert got == {1: T([1]), 2: T(["x1 + 1"])}


def test_matches_sympy_apart():
    Q1, Q2 = T(["-x1", "1"]), T(["x2", "0", "1"])
    num = T(["1", "x1", "0", "1"])
    pf = partial_fractions(num, [(Q1, 2), (Q2, 1)])
    want = sympy.apart((1 + x1 * t + t ** 3) / ((t - x1) ** 2 * (t ** 2 + x2)), t)
    assert sympy.cancel(to_sympy(pf.to_ratfunc(), 2) - want) == 0
    # each numerator degree is below its factor's degree
    assert all(P.degree < Q.degree for Q, _, P in pf.terms)


def test_non_monic_factor_is_rejected():
    with pytest.raises(DomainError, match="monic"):
        partial_fractions(T([1]), [(T(["1", "2"]), 1)])


def test_non_coprime_factors_are_rejected():
    Q = T(["-x1", "1"])
    with pytest.raises(DomainError, match="coprime"):
        partial_fractions(T([1]), [(Q, 1), (Q * T(["1", "1"]), 1)])


# -- random instances --------------------------------------------------------------------

@settings(max_examples=25)
@given(seeds)
def test_reconstruction_is_exact(seed):
    num, factors = random_partial_fraction_instance(2, SeededSource(seed))
    pf = partial_fractions(num, factors)
    assert pf.reconstruct_numerator(factors) == num
    den = TPoly.constant(1, 2)
    for Q, m in factors:
        den = den * Q ** m
    assert pf.to_ratfunc() == num.to_ratfunc() / den.to_ratfunc()


@settings(max_examples=8)
@given(seeds)
def test_random_instances_agree_with_sympy(seed):
    num, factors = random_partial_fraction_instance(2, SeededSource(seed), max_deg=3)
    pf = partial_fractions(num, factors)
    den = sympy.Integer(1)
    for Q, m in factors:
        den *= to_sympy(Q.to_ratfunc(), 2) ** m
    want = to_sympy(num.to_ratfunc(), 2) / den
    assert sympy.cancel(to_sympy(pf.to_ratfunc(), 2) - want) == 0
