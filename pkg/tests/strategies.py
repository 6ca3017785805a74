"""Hypothesis strategies for polynomials, rational functions and permutations."""

from hypothesis import strategies as st

from hilbert90.exactfield import FinPermutation, MultiPoly, RatFunc

coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def exponents(n, max_deg=2):
    return st.tuples(*[st.integers(0, max_deg)] * n)


def polys(n, max_deg=2, max_terms=4):
    return st.dictionaries(exponents(n, max_deg), coeffs, max_size=max_terms).map(
        lambda d: MultiPoly(d, n))


def nonzero_polys(n, max_deg=2, max_terms=4):
    return polys(n, max_deg, max_terms).filter(lambda p: not p.is_zero())


def ratfuncs(n, max_deg=2):
    return st.builds(RatFunc, polys(n, max_deg), nonzero_polys(n, max_deg, 3))


def nonzero_ratfuncs(n, max_deg=2):
    return st.builds(RatFunc, nonzero_polys(n, max_deg), nonzero_polys(n, max_deg, 3))


def permutations(n):
    return st.permutations(list(range(1, n + 1))).map(FinPermutation)


@st.composite
def level_and(draw, build, lo=1, hi=4):
    """A level ``n`` together with ``build(n)`` drawn at that level."""
    n = draw(st.integers(lo, hi))
    return n, draw(build(n))


seeds = st.integers(0, 2 ** 32 - 1)
small_seeds = st.integers(0, 10 ** 6)

