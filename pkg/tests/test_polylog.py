from fractions import Fraction

import pytest
from hypothesis import given, assume, strategies as st

from fqpolylog import (FieldTower, RatFunc, TPoly, CInftyElem, TateElem, kpl_eval, kmpl_eval, kmpl_domain_check,
                       tdeform, twist, eval_at_theta, embed_ratfunc, kmpl_system_solve, monodromy_basis,
                       reduce_mod_monodromy, continue_kmpl, wp, DomainError, ConfigError, IndexTuple)
from fqpolylog.poly import Poly, NEG_INF, norm_inf
from fqpolylog.polylog import direct_kmpl_vector, _expansion
from fqpolylog.series import reduce_mod_A

from strategies import ratfuncs

F2 = FieldTower.for_q(2)
F3 = FieldTower.for_q(3)


def _one(F):
    return RatFunc.from_int(F, 1)


def _theta_q_minus_theta(F, i):
    q = F.q
    return Poly.monomial(F, 1, q ** i) - Poly.theta(F)


def _kpl_oracle(n, u, imax, prec):
    """Truncated sum built in K, then expanded once."""
    F = u.tower
    acc = RatFunc.from_int(F, 0)
    for i in range(1, imax + 1):
        d = _theta_q_minus_theta(F, i)
        den = Poly(F, [1])
        for _ in range(n):
            den = den * d
        acc = acc + u ** (F.q ** i) * RatFunc(Poly(F, [1]), den)
    return embed_ratfunc(acc, prec + 2 * F.q ** imax)


def _close(x, y, prec):
    return (x - y).bound() <= -prec


@pytest.mark.parametrize("q,n", [(2, 1), (3, 1), (3, 2), (3, 3)])
def test_kpl_matches_partial_sum(q, n):
    F = FieldTower.for_q(q)
    prec = 25
    val = kpl_eval(n, _one(F), prec)
    oracle = _kpl_oracle(n, _one(F), 5, prec)
    assert val.floor_exponent() == -prec
    assert _close(val, oracle, prec)


@given(ratfuncs(F3, 2))
def test_kpl_partial_sum_inside_disc(u):
    assume(not u.is_zero() and norm_inf(u) < 1)
    prec = 20
    assert _close(kpl_eval(1, u, prec), _kpl_oracle(1, u, 4, prec), prec)


@given(ratfuncs(F3, 2), ratfuncs(F3, 2), st.integers(0, 2), st.integers(0, 2))
def test_kpl_fq_linear(u, w, a, b):
    assume(norm_inf(u) < 2 and norm_inf(w) < 2)
    prec = 20
    lhs = kpl_eval(2, u * a + w * b, prec)
    rhs = kpl_eval(2, u, prec) * a + kpl_eval(2, w, prec) * b
    assert _close(lhs, rhs, prec)


def test_kpl_domain():
    with pytest.raises(DomainError):
        kpl_eval(1, RatFunc.theta(F3))
    assert kpl_eval(2, RatFunc.from_int(F3, 0), 10) == CInftyElem(F3, 1, {}, -10)


@pytest.mark.parametrize("coeffs,n", [([1], 1), ([1, 1], 2), ([0, 1, 2], 3)])
def test_tdeform_difference_equation(coeffs, n):
    f = TPoly(F3, [RatFunc.from_int(F3, c) for c in coeffs])
    L = tdeform(f, n, 8, 30)
    lhs = twist(L, -1) - L
    rhs = _expansion(f, n, 8, 30)
    for j in range(L.N + 1):
        d = lhs.coeffs[j] - rhs.coeffs[j]
        assert d.bound() <= d.floor_exponent()


def test_tdeform_decomposition():
    # L_{1+t,2} = L_{1,2} + t L_{1,2}
    one = TPoly(F3, [_one(F3)])
    f = one + TPoly.t(F3)
    L = tdeform(f, 2, 8, 30)
    L1 = tdeform(one, 2, 8, 30)
    rhs = L1 + L1.shift_t(1)
    for j in range(L.N):
        d = L.coeffs[j] - rhs.coeffs[j]
        assert d.bound() <= d.floor_exponent()


@pytest.mark.parametrize("u,n", [(1, 1), (2, 2), (1, 3)])
def test_tdeform_specializes_to_kpl(u, n):
    f = TPoly(F3, [RatFunc.from_int(F3, u)])
    L = tdeform(f, n, 20, 30)
    val = eval_at_theta(L)
    ref = kpl_eval(n, RatFunc.from_int(F3, u), 30)
    d = val - ref
    assert d.bound() <= max(val.floor_exponent(), ref.floor_exponent())
    assert max(val.floor_exponent(), ref.floor_exponent()) <= -15


def test_tdeform_norm_check():
    with pytest.raises(DomainError):
        tdeform(TPoly(F3, [RatFunc.theta(F3)]), 1)
    z = tdeform(TPoly(F3), 2, 4, 10)
    assert all(not c.terms for c in z.coeffs)


def test_kmpl_double_sum_oracle():
    prec = 30
    val = kmpl_eval((1, 1), [_one(F3), _one(F3)], prec)
    acc = CInftyElem(F3)
    for i1 in range(2, 6):
        for i2 in range(1, i1):
            den = _theta_q_minus_theta(F3, i1) * _theta_q_minus_theta(F3, i2)
            acc = acc + embed_ratfunc(RatFunc(Poly(F3, [1]), den), prec + 400)
    assert _close(val, acc, prec)


def test_kmpl_depth_one_is_kpl():
    a = kmpl_eval((2,), [RatFunc.theta(F3)], 20)
    b = kpl_eval(2, RatFunc.theta(F3), 20)
    assert _close(a, b, 20)


def test_kmpl_zero_argument():
    v = kmpl_eval((1, 1), [_one(F3), RatFunc.from_int(F3, 0)], 15)
    assert not v.terms


def test_kmpl_domain_check_examples():
    one = _one(F3)
    assert kmpl_domain_check((1, 1), [one, one])
    assert not kmpl_domain_check((0, 1), [one, one])
    assert kmpl_domain_check((1, 1), [RatFunc.from_int(F3, 0)] * 2)
    with pytest.raises(DomainError):
        kmpl_eval((0, 1), [one, one])
    with pytest.raises(ConfigError):
        IndexTuple(())


def test_system_solve_residuals():
    t = TPoly.t(F3)
    f = [TPoly(F3, [_one(F3)]) + t, TPoly(F3, [RatFunc.from_int(F3, 2)])]
    sol = kmpl_system_solve((1, 2), f, 8, 30)
    r1 = wp(sol[0]) - _expansion(f[0], 1, 8, 30)
    r2 = wp(sol[1]) - (_expansion(f[1], 2, 8, 30) * sol[0]).truncate_t(8)
    for r in (r1, r2):
        for c in r.coeffs:
            assert c.bound() <= c.floor_exponent()


def test_monodromy_depth_one():
    M = monodromy_basis((), [], tower=F3)
    assert len(M.matrix) == 1 and M.matrix[0][0] == CInftyElem.from_int(F3, 1)
    w = [CInftyElem(F3, 1, {2: 1, -1: 2})]
    assert reduce_mod_monodromy(w, M)[0] == reduce_mod_A(w[0])


def _monodromy_11():
    return monodromy_basis((1,), [_one(F3)], prec=30, tower=F3)


def test_monodromy_subdiagonal_is_li1():
    M = _monodromy_11()
    assert M.matrix[0][1] == CInftyElem(M.matrix[0][1].F)
    assert _close(M.matrix[1][0], kpl_eval(1, _one(F3), 30), 28)


def test_lattice_vectors_reduce_to_zero():
    M = _monodromy_11()
    a = CInftyElem(F3, 1, {2: 1, 0: 2})
    b = CInftyElem(F3, 1, {1: 1})
    w = [a * M.matrix[0][0] + b * M.matrix[0][1], a * M.matrix[1][0] + b * M.matrix[1][1]]
    for x in reduce_mod_monodromy(w, M):
        assert not x.terms


@given(st.dictionaries(st.integers(-6, 4), st.integers(1, 2), max_size=4),
       st.dictionaries(st.integers(-6, 4), st.integers(1, 2), max_size=4))
def test_reduction_idempotent(t1, t2):
    M = _monodromy_11()
    w = [CInftyElem(F3, 1, t1), CInftyElem(F3, 1, t2)]
    once = reduce_mod_monodromy(w, M)
    twice = reduce_mod_monodromy(once, M)
    assert all(x == y for x, y in zip(once, twice))


def test_branch_choice_moves_by_lattice():
    M = _monodromy_11()
    shift = TPoly(F3, [_one(F3)]) + TPoly.t(F3)
    M2 = monodromy_basis((1,), [_one(F3)], prec=30, tower=F3, branches=[[shift]])
    diff = [M2.matrix[r][0] - M.matrix[r][0] for r in range(2)]
    for x in reduce_mod_monodromy(diff, M):
        assert x.bound() <= x.floor_exponent()


def test_continued_vector_matches_direct():
    one = _one(F3)
    w, M = continue_kmpl((1, 1), one, [one], prec=30)
    d = reduce_mod_monodromy(direct_kmpl_vector((1, 1), [one, one], 30), M)
    for x, y in zip(w, d):
        assert (x - y).bound() <= -15


def test_continued_vector_delta_equation():
    one, th = _one(F3), RatFunc.theta(F3)
    a, M = continue_kmpl((1, 1), th, [one], prec=30)
    b, _ = continue_kmpl((1, 1), one, [one], prec=31)
    c, _ = continue_kmpl((0, 1), one, [one], prec=30)
    diff = [x - y.shift(1) - z for x, y, z in zip(a, b, c)]
    for x in reduce_mod_monodromy(diff, M):
        assert x.bound() <= -25


def test_continue_kmpl_zero():
    w, _ = continue_kmpl((1, 1), RatFunc.from_int(F3, 0), [_one(F3)], prec=20)
    assert all(not x.terms for x in w)
