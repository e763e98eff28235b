from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from famverify.errors import DimensionMismatch, MissingAssignment, ZeroAtNegativePower
from famverify.phasepoly import (
    NEG_INF, DegreePair, GaussianRational, LaurentPoly, PolyMatrix, mat_degree, mat_kron,
    mat_mul, mat_quotient_reduce, poly_add, poly_degree, poly_eval, poly_mul, quotient_reduce,
    root_of_unity,
)

Y = LaurentPoly.var("Y")
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


# strategies

def laurent(variables=("x", "y"), max_pos=3, max_neg=2, max_terms=4):
    exps = st.integers(-max_neg, max_pos)
    coeff = st.builds(lambda n, d, i: GaussianRational(Fraction(n, d), i),
                      st.integers(-9, 9), st.sampled_from((1, 2, 3, 4)), st.integers(-3, 3))
    mono = st.tuples(*[exps for _ in variables]).map(lambda es: dict(zip(variables, es)))
    term = st.tuples(mono, coeff)
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((LaurentPoly.monomial(m, c) for m, c in ts), LaurentPoly()))


def matrices(rows, cols, **kw):
    return st.lists(laurent(**kw), min_size=rows * cols, max_size=rows * cols).map(
        lambda es: PolyMatrix(rows, cols, es))


# add / mul

def test_add_cancels():
    assert poly_add(Y + 1, -Y) == ONE


def test_add_zero_identity():
    p = Y ** 2 - 3
    assert poly_add(ZERO, p) == p


def test_add_example_terms():
    p = poly_add(Y ** 8 + 1, Y ** -2)
    assert dict(p.items()) == {(("Y", 8),): 1, (): 1, (("Y", -2),): 1}


def test_mul_inverse_pair():
    assert poly_mul(Y, Y ** -1) == ONE


def test_mul_difference_of_squares():
    assert poly_mul(Y + 1, Y - 1) == Y ** 2 - 1


@given(laurent(), laurent())
def test_mul_degree_subadditive(p, q):
    for v in ("x", "y"):
        d = poly_degree(poly_mul(p, q), v)
        bound = poly_degree(p, v) + poly_degree(q, v)
        assert d.pos <= bound.pos and d.neg <= bound.neg


@given(laurent(), laurent(), laurent())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == ZERO


def test_canonical_terms_have_nonzero_coefficients():
    p = LaurentPoly({(("Y", 1),): 0, (("Y", 2),): 3, (("Y", 0),): 1})
    assert all(c != 0 for _, c in p.items())
    assert all(e != 0 for m, _ in p.items() for _, e in m)


# degree

def test_degree_example():
    assert poly_degree(Y ** 8 + 1 + Y ** -2, "Y") == DegreePair(8, 2)


def test_degree_zero_polynomial():
    assert poly_degree(ZERO, "Y") == DegreePair(NEG_INF, NEG_INF)


def test_degree_constant():
    assert poly_degree(LaurentPoly.const(5), "Y") == DegreePair(0, 0)


# evaluation

def test_eval_square():
    assert poly_eval(Y ** 2, {"Y": 3}) == 9


def test_eval_pole():
    with pytest.raises(ZeroAtNegativePower):
        poly_eval(Y ** -1, {"Y": 0})


def test_eval_two_vars():
    p = LaurentPoly.var("Y1") * LaurentPoly.var("Y2") + 1
    assert poly_eval(p, {"Y1": 2, "Y2": 5}) == 11


def test_eval_missing():
    with pytest.raises(MissingAssignment):
        poly_eval(Y, {})


def test_eval_exact_rational():
    assert poly_eval(Y ** -2, {"Y": 2}) == Fraction(1, 4)


# quotient

def test_quotient_examples():
    assert quotient_reduce(Y ** 8, "Y", 8) == ONE
    assert quotient_reduce(Y ** -1, "Y", 8) == Y ** 7
    assert quotient_reduce(Y ** 3, "Y", 8) == Y ** 3


@given(laurent(("Y", "x"), max_pos=12, max_neg=12), st.integers(1, 9))
def test_quotient_caps_degree(p, g):
    d = poly_degree(quotient_reduce(p, "Y", g), "Y")
    assert d.is_neg_inf or (d.pos <= g - 1 and d.neg == 0)


@given(laurent(("Y", "x"), max_pos=10, max_neg=10), laurent(("Y", "x"), max_pos=10, max_neg=10),
       st.integers(1, 9))
def test_quotient_idempotent_and_multiplicative(p, q, g):
    r = lambda t: quotient_reduce(t, "Y", g)
    assert r(r(p)) == r(p)
    assert r(p * q) == r(r(p) * r(q))
    assert r(p + q) == r(p) + r(q)


@given(laurent(("Y",), max_pos=10, max_neg=10), st.integers(1, 9), st.integers(0, 8))
def test_quotient_agrees_on_roots_of_unity(p, g, k):
    y = root_of_unity(Fraction(2 * k, g))
    a, b = complex(poly_eval(p, {"Y": y})), complex(poly_eval(quotient_reduce(p, "Y", g), {"Y": y}))
    assert abs(a - b) < 1e-9


# matrices

def test_mat_identity():
    m = PolyMatrix.from_rows([[Y, 2], [Y ** -1, Y + 1]])
    assert mat_mul(PolyMatrix.identity(2), m) == m
    assert mat_mul(m, PolyMatrix.identity(2)) == m


def test_mat_inverse_entry():
    assert mat_mul(PolyMatrix.from_rows([[Y]]), PolyMatrix.from_rows([[Y ** -1]])) == \
        PolyMatrix.from_rows([[1]])


def test_mat_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat_mul(PolyMatrix.identity(2), PolyMatrix.identity(3))


def test_kron_units():
    m = PolyMatrix.from_rows([[Y, 2], [0, Y + 1]])
    assert mat_kron(PolyMatrix.from_rows([[1]]), m) == m
    assert mat_kron(PolyMatrix.identity(2), PolyMatrix.identity(2)) == PolyMatrix.identity(4)


def test_kron_layout():
    a = PolyMatrix.from_rows([[1, 2], [3, 4]])
    b = PolyMatrix.from_rows([[0, 1], [1, 0]])
    k = mat_kron(a, b)
    assert k[0, 1] == ONE and k[1, 0] == ONE and k[0, 3] == LaurentPoly.const(2)
    assert k[3, 2] == LaurentPoly.const(4)


@given(matrices(2, 2, max_terms=2), matrices(2, 2, max_terms=2), matrices(2, 2, max_terms=2),
       matrices(2, 2, max_terms=2))
def test_mixed_product_property(a, b, c, d):
    assert mat_mul(mat_kron(a, b), mat_kron(c, d)) == mat_kron(mat_mul(a, c), mat_mul(b, d))


def test_mat_degree_example():
    m = PolyMatrix.from_rows([[2, Y ** -3], [Y, Y ** 2 - 2]])
    assert mat_degree(m, "Y") == DegreePair(2, 3)


def test_mat_degree_zero():
    assert mat_degree(PolyMatrix.zeros(2, 2), "Y") == DegreePair(NEG_INF, NEG_INF)


@given(matrices(3, 3, max_terms=2), matrices(3, 3, max_terms=2))
def test_mat_degree_subadditive(a, b):
    for v in ("x", "y"):
        for prod in (mat_mul(a, b), mat_kron(a, b)):
            d = mat_degree(prod, v)
            bound = mat_degree(a, v) + mat_degree(b, v)
            assert d.pos <= bound.pos and d.neg <= bound.neg


def test_mat_quotient_reduce():
    m = PolyMatrix.from_rows([[Y ** 9, Y ** -1]])
    assert mat_quotient_reduce(m, "Y", 8) == PolyMatrix.from_rows([[Y, Y ** 7]])


# coefficients

def test_gaussian_rational_arithmetic():
    z = GaussianRational(Fraction(1, 2), 1)
    assert z * z.conjugate() == Fraction(5, 4)
    assert (z / z) == 1
    assert complex(z + 1j) == complex(0.5, 2)


def test_root_of_unity_exact_quarter_turns():
    assert root_of_unity(Fraction(1, 2)) == GaussianRational(0, 1)
    assert root_of_unity(Fraction(1)) == -1
    assert isinstance(root_of_unity(Fraction(1, 4)), complex)


def test_float_coefficients_near_zero_dropped():
    p = LaurentPoly.const(1e-15) + Y
    assert p == Y


def test_to_string_is_deterministic():
    p = Y ** -1 + 3 * Y ** 2 + 1
    assert p.to_string() == "3*Y^2 + 1 + Y^-1"
