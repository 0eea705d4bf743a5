from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fqpolylog import FieldTower, CInftyElem, ConfigError, parse_series, parse_ratfunc, parse_tpoly, format_series
from fqpolylog.series import tail_elem
from fqpolylog.textio import parse_field_elem, tokenize

from strategies import ratfuncs, tpolys, small_towers

F9 = FieldTower.make(3, 1, None, 2)
F4 = FieldTower.for_q(4)
F3 = FieldTower.for_q(3)


@given(st.sampled_from([F3, F9, F4]).flatmap(
    lambda F: st.tuples(st.just(F), st.integers(1, 4),
                        st.dictionaries(st.integers(-12, 12), st.integers(1, F.Q - 1), max_size=6),
                        st.one_of(st.none(), st.integers(-20, -13)))))
def test_series_round_trip(args):
    F, e, terms, floor = args
    x = CInftyElem(F, e, terms, floor if floor is not None else float("-inf"))
    assert parse_series(format_series(x), F) == x


@pytest.mark.parametrize("r", [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(5, 3)])
def test_tail_round_trip(r):
    x = tail_elem(F3, Fraction(1, 3), r, 2) + CInftyElem(F3, 1, {-2: 1}, -9)
    assert parse_series(str(x), F3) == x


@given(small_towers().flatmap(lambda F: ratfuncs(F, 3)))
def test_ratfunc_round_trip(x):
    assert parse_ratfunc(x.to_str(), x.tower) == x


@given(small_towers().flatmap(lambda F: tpolys(F, 3, 2, with_den=True)))
def test_tpoly_round_trip(f):
    assert parse_tpoly(f.to_str(), f.tower) == f


def test_expression_grammar():
    f = parse_tpoly("(t - th)^2 + 2*th*t", F3)
    g = parse_tpoly("t^2 + th^2", F3)
    assert f == g
    x = parse_ratfunc("1/(th^2 + 1)", F3)
    assert x.den.deg == 2
    assert parse_field_elem("g^2", F9) == F9.mul(3, 3)


@pytest.mark.parametrize("bad", ["th +", "t^th", "1/0", "(th", "th $ 2"])
def test_parse_errors(bad):
    with pytest.raises((ConfigError, ZeroDivisionError)):
        parse_tpoly(bad, F3)


def test_ratfunc_rejects_t():
    with pytest.raises(ConfigError):
        parse_ratfunc("t + th", F3)


def test_tokens():
    kinds = [k for k, _ in tokenize("2*th^3 + t")]
    assert kinds[0] == "num" and "id" in kinds


def test_tail_needs_positive_argument():
    with pytest.raises(ValueError):
        tail_elem(F3, 0, Fraction(-1, 3), 1)
