from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fqpolylog import (FieldTower, RatFunc, TPoly, CInftyElem, TateElem, wp, wp_inverse, as_solve_series,
                       PrecisionError, UnsupportedTailError, ResourceBoundError)
from fqpolylog.poly import NEG_INF
from fqpolylog.series import tail_elem
from fqpolylog.tate import POS_INF

F2 = FieldTower.for_q(2)
F3 = FieldTower.for_q(3)


def _const(F, terms, floor=NEG_INF, e=1):
    return TateElem(F, [CInftyElem(F, e, terms, floor)])


def _max_residual(x):
    res = max((c.bound() for c in x.coeffs), default=NEG_INF)
    fl = max((c.floor_exponent() for c in x.coeffs), default=NEG_INF)
    return res, fl


def test_negative_exponent_example():
    s = wp_inverse(_const(F3, {-1: 1}), 10)
    # F = sum_{i>=1} theta^(-3^i)
    c = s.coeffs[0]
    assert c.coeff(-3) == 1 and c.coeff(-9) == 1 and c.coeff(-1) == 0
    assert c.floor_exponent() <= -10
    res, fl = _max_residual(wp(s) - _const(F3, {-1: 1}))
    assert res <= fl


def test_positive_exponent_example():
    s = wp_inverse(_const(F3, {1: 1}), 10)
    c = s.coeffs[0]
    assert c.coeff(1) == 2 and c.coeff(Fraction(1, 3)) == 2
    assert c.tails == {(Fraction(0), Fraction(1, 3)): 2}
    d = wp(s) - _const(F3, {1: 1})
    assert all(x == CInftyElem(F3) for x in d.coeffs)


def test_constant_needs_extension():
    s = wp_inverse(_const(F3, {0: 1}), 10)
    assert s.F.m == 3
    c = s.coeffs[0]
    # the root z = F^(1/q) of z^q - z = -1 is the one with zero F_q-component
    assert s.F.fq_component(s.F.frob(c.coeff(0), -1)) == 0
    d = wp(s) - _const(F3, {0: 1}).lift(s.F)
    assert all(x == CInftyElem(s.F) for x in d.coeffs)


def _tate_strategy(F):
    coef = st.dictionaries(st.integers(-5, 3), st.integers(1, F.Q - 1), max_size=3)
    return st.lists(coef, min_size=1, max_size=6).map(lambda rows: TateElem(F, [CInftyElem(F, 1, r) for r in rows]))


@given(st.sampled_from([F2, F3]).flatmap(_tate_strategy))
def test_round_trip(g):
    s = wp_inverse(g, 12)
    res, fl = _max_residual(wp(s) - g.lift(s.F))
    assert res <= fl
    assert fl < 0


@given(st.sampled_from([F2, F3]).flatmap(lambda F: st.tuples(_tate_strategy(F), _tate_strategy(F))))
def test_linear_up_to_kernel(gh):
    g, h = gh
    prec = 12
    d = wp_inverse(g + h, prec) - wp_inverse(g, prec) - wp_inverse(h, prec)
    # the difference is killed by wp, so it is an F_q[t] element up to precision
    for c in d.coeffs:
        known = CInftyElem(c.F, c.e, c.terms)
        for ex, code in known.items():
            assert ex.denominator == 1 and ex >= 0 and c.F.is_fq(code)


@pytest.mark.parametrize("coeffs", [[1], [0, 2], [1, 1, 1]])
def test_branch_shift(coeffs):
    g = _const(F3, {-1: 1, 0: 2})
    a = TPoly(F3, [RatFunc.from_int(F3, c) for c in coeffs])
    base = wp_inverse(g, 10)
    moved = wp_inverse(g, 10, branch=a)
    d = moved - base
    for j, c in enumerate(d.coeffs):
        want = CInftyElem.from_int(d.F, coeffs[j] if j < len(coeffs) else 0)
        assert c.items() == want.items()


def test_branch_must_be_fq_t():
    with pytest.raises(ValueError):
        wp_inverse(_const(F3, {-1: 1}), 10, branch=TPoly(F3, [RatFunc.theta(F3)]))


def test_tail_rules():
    g = TateElem(F3, [CInftyElem(F3, 1, {-1: 1})], tail=-2)
    s = wp_inverse(g, 10)
    assert s.tail == 3 * -2 - 2 * 1
    g = TateElem(F3, [CInftyElem(F3, 1, {-1: 1})], tail=3)
    assert wp_inverse(g, 10).tail == POS_INF


def test_as_solver_refusals():
    with pytest.raises(UnsupportedTailError):
        as_solve_series(tail_elem(F3, 0, Fraction(1), 1))
    with pytest.raises(PrecisionError):
        as_solve_series(CInftyElem(F3, 1, {-1: 1}, 0))
    with pytest.raises(ResourceBoundError):
        as_solve_series(CInftyElem(F3, 1, {0: 1}), max_m=2)


def test_as_solver_reports_growth():
    r = as_solve_series(CInftyElem(F3, 1, {0: 1, 2: 1}))
    assert r.field_growth["m"] == (1, 3)
    assert r.field_growth["e"] == (1, 9)
    y = r.value
    lhs = y.frob_power(1) - y
    assert lhs == CInftyElem(F3, 1, {0: 1, 2: 1}).lift(y.F)
