from fractions import Fraction

import pytest
from hypothesis import given, assume, strategies as st

from fqpolylog import (FieldTower, RatFunc, CInftyElem, embed_ratfunc, series_inv, qth_root_series,
                       reduce_mod_A, PrecisionError, UnsupportedTailError)
from fqpolylog.poly import Poly, NEG_INF, norm_inf
from fqpolylog.series import tail_elem, series_pow, residual_mod_A

from strategies import ratfuncs, small_towers

F3 = FieldTower.for_q(3)
F9 = FieldTower.make(3, 1, None, 2)


def _long_division(num, den, K):
    """num/den = Q theta^-K + (smaller than theta^-K), with Q from polynomial division."""
    shifted = num * Poly.monomial(num.tower, 1, K)
    quo, _ = shifted.divmod(den)
    return {d - K: c for d, c in enumerate(quo.c) if c}


def test_embed_examples():
    x = RatFunc(Poly(F3, [1]), Poly(F3, [2, 1]))        # 1/(theta - 1)
    s = embed_ratfunc(x, 3)
    assert str(s) == "1*th^(-1/1)+1*th^(-2/1)+1*th^(-3/1) + O(th^(-4/1))"
    y = RatFunc(Poly(F3, [1]), Poly(F3, [1, 0, 1]))     # 1/(theta^2 + 1)
    assert str(embed_ratfunc(y, 6)) == "1*th^(-2/1)+2*th^(-4/1)+1*th^(-6/1) + O(th^(-8/1))"


@given(small_towers().flatmap(lambda F: ratfuncs(F, 4)))
def test_embed_matches_long_division(x):
    assume(not x.is_zero())
    K = 9
    oracle = _long_division(x.num, x.den, K)
    prec = K + norm_inf(x) + 1
    s = embed_ratfunc(x, prec)
    assert s.floor_exponent() == (NEG_INF if x.is_poly() else -K - 1)
    assert dict(s.items()) == {Fraction(k): c for k, c in oracle.items()}


def test_polynomials_embed_exactly():
    x = RatFunc(Poly(F3, [1, 0, 2]))
    s = embed_ratfunc(x)
    assert s.is_exact()
    assert s.items() == [(Fraction(2), 2), (Fraction(0), 1)]


@given(small_towers().flatmap(lambda F: ratfuncs(F, 3)), st.integers(2, 12))
def test_embed_multiplies_back(x, prec):
    assume(not x.is_zero())
    s = embed_ratfunc(x, prec)
    back = s * CInftyElem.from_poly(x.den) - CInftyElem.from_poly(x.num)
    assert back.bound() <= back.floor_exponent()


@given(small_towers().flatmap(lambda F: ratfuncs(F, 3)), st.integers(2, 10))
def test_precision_contract(x, prec):
    """Terms certified at low precision survive at high precision."""
    assume(not x.is_zero())
    lo = embed_ratfunc(x, prec)
    hi = embed_ratfunc(x, prec + 15)
    d = lo - hi
    assert d.bound() <= lo.floor_exponent()


@given(small_towers().flatmap(lambda F: ratfuncs(F, 3)), st.integers(3, 10))
def test_series_inverse(x, prec):
    assume(not x.is_zero())
    s = embed_ratfunc(x, prec)
    prod = s * series_inv(s)
    one = prod - CInftyElem.from_int(s.F, 1)
    assert one.bound() <= prod.floor_exponent()
    assert prod.floor_exponent() < 0


def test_inverse_of_zero_raises():
    with pytest.raises(PrecisionError):
        series_inv(CInftyElem(F3, 1, {}, -5))


@given(st.dictionaries(st.integers(-20, 20), st.integers(1, 8), max_size=6), st.integers(-30, -21))
def test_qth_root_powers_back(terms, floor):
    x = CInftyElem(F9, 1, terms, floor)
    r = qth_root_series(x)
    assert r.frob_power(1) == x
    assert r.F.frob(1, -1) == 1


@given(st.dictionaries(st.integers(-10, 10), st.integers(1, 8), max_size=6))
def test_frob_matches_product(terms):
    x = CInftyElem(F9, 1, terms)
    assert x.frob_power(1) == x * x * x


def test_reduce_mod_a_examples():
    x = CInftyElem(F9, 1, {2: 3, 1: 4, 0: 1, -1: 5})
    assert str(reduce_mod_A(x)) == "g*th^(2/1)+g*th^(1/1)+(g+2)*th^(-1/1)"
    fq_only = CInftyElem(F3, 1, {4: 1, 0: 2})
    assert reduce_mod_A(fq_only) == CInftyElem(F3)


@given(st.dictionaries(st.integers(-10, 10), st.integers(1, 8), max_size=6), st.integers(1, 3))
def test_reduce_mod_a_properties(terms, e):
    x = CInftyElem(F9, e, terms)
    r = reduce_mod_A(x)
    assert reduce_mod_A(r) == r
    a = x - r
    # the difference is an F_q-polynomial in theta
    for ex, c in a.items():
        assert ex.denominator == 1 and ex >= 0
        assert F9.is_fq(c)


@given(st.dictionaries(st.integers(-10, 10), st.integers(1, 2), max_size=5),
       st.dictionaries(st.integers(-10, 10), st.integers(1, 2), max_size=5),
       st.integers(-15, -11), st.integers(-15, -11))
def test_ultrametric(t1, t2, f1, f2):
    x = CInftyElem(F3, 1, t1, f1)
    y = CInftyElem(F3, 1, t2, f2)
    assert (x + y).bound() <= max(x.bound(), y.bound())
    assert (x * y).bound() <= x.bound() + y.bound()


def test_symbolic_tail_identity():
    y = tail_elem(F3, 0, Fraction(1), 1)       # T(theta): y^3 - y = theta
    assert y.frob_power(1) - y == CInftyElem.monomial(F3, 1, 1)
    w = tail_elem(F3, 0, Fraction(2), 1)
    assert w.frob_power(1) - w == CInftyElem.monomial(F3, 1, 2)
    z = qth_root_series(y)
    assert z.frob_power(1) == y


def test_tail_products_are_refused():
    y = tail_elem(F3, 0, Fraction(1), 1)
    with pytest.raises(UnsupportedTailError):
        _ = y * y


def test_series_pow_and_residual():
    x = embed_ratfunc(RatFunc(Poly(F3, [1]), Poly(F3, [2, 1])), 10)
    cube = series_pow(x, 3)
    oracle = embed_ratfunc(RatFunc(Poly(F3, [1]), Poly(F3, [2, 1]) * Poly(F3, [2, 1]) * Poly(F3, [2, 1])), 12)
    assert residual_mod_A(cube, oracle) <= cube.floor_exponent()


def test_equal_mod_a_three_valued():
    x = CInftyElem(F3, 1, {3: 1, -1: 2})
    assert x.equal_mod_A(CInftyElem(F3, 1, {-1: 2})) is True
    assert x.equal_mod_A(CInftyElem(F3, 1, {-1: 1})) is False
    assert x.equal_mod_A(CInftyElem(F3, 1, {-1: 2}, -5)) is None
