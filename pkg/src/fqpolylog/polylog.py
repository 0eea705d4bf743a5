"""Kochubei polylogarithms, their multiple versions, t-deformations and monodromy."""
from __future__ import annotations

from fractions import Fraction
from math import floor as _ifloor
from typing import NamedTuple, Sequence

from .errors import DomainError, ConfigError
from .fields import FieldTower
from .poly import NEG_INF, RatFunc, TPoly, binom_mod_p, gauss_norm_exponent
from .series import CInftyElem, to_series, reduce_mod_A
from .tate import TateElem, geom_expand, eval_at_theta, DEFAULT_PREC, DEFAULT_T_PREC
from .wp import wp_inverse


class IndexTuple(tuple):
    def __new__(cls, s):
        s = tuple(int(x) for x in s)
        if not s or any(x < 0 for x in s):
            raise ConfigError("an index needs r >= 1 nonnegative entries")
        return super().__new__(cls, s)

    @property
    def depth(self):
        return len(self)


class MonodromyBasis(NamedTuple):
    matrix: list          # r x r lower unitriangular, entries CInftyElem
    columns_from: tuple   # suffix start index of each column


def _target(prec):
    return Fraction(-prec)


def _inv_power_series(F, i, n, floor):
    """1/(theta^(q^i) - theta)^n, truncated at the absolute exponent ``floor``."""
    q = F.q
    qi = q ** i
    p = F.p
    terms = {}
    j = 0
    while True:
        ex = -n * qi - j * (qi - 1)
        if ex <= floor:
            break
        b = binom_mod_p(j + n - 1, n - 1, p)
        if b:
            terms[ex] = b
        j += 1
    return CInftyElem(F, 1, terms, ex)


def _kpl_term(n, u, i, floor):
    """u^(q^i) / (theta^(q^i) - theta)^n with absolute floor <= floor."""
    F = u.F
    ui = u.frob_power(i)
    if n == 0:
        return ui.truncate(floor)
    vu = ui.bound()
    # keep the inverse precise enough that its error times |u^(q^i)| is below floor
    fl_inv = floor - (vu if vu != NEG_INF else 0)
    d = _inv_power_series(F, i, n, _ifloor(fl_inv) - 1)
    return (ui * d).truncate(floor)


def kpl_eval(n: int, u, prec: int = DEFAULT_PREC) -> CInftyElem:
    """sum_{i>=1} u^(q^i)/(theta^(q^i)-theta)^n, certified down to theta^(-prec)."""
    u = to_series(u, prec + 1)
    v = u.bound()
    if v == NEG_INF:
        return CInftyElem(u.F, 1, {}, -prec)
    if not v < n:
        raise DomainError(f"|u| = q^{v} is outside the disc |u| < q^{n}")
    q = u.F.q
    floor = _target(prec)
    acc = CInftyElem(u.F)
    i = 1
    while q ** i * (v - n) > floor:
        acc = acc + _kpl_term(n, u, i, floor)
        i += 1
    # remaining terms have norm at most q^(q^i (v - n)) <= q^floor
    return acc.truncate(floor)


def kmpl_domain_check(s, u) -> bool:
    s = IndexTuple(s)
    if len(u) != len(s):
        raise ConfigError("index and argument lengths differ")
    for sj, uj in zip(s, u):
        uj = to_series(uj)
        if not uj.bound() < sj:
            return False
    return True


def kmpl_eval(s, u, prec: int = DEFAULT_PREC) -> CInftyElem:
    """Nested sum over i_1 > ... > i_r > 0; u_1 carries the largest index."""
    s = IndexTuple(s)
    u = [to_series(x, prec + 1) for x in u]
    if not kmpl_domain_check(s, u):
        raise DomainError(f"arguments are outside the polydisc for index {tuple(s)}")
    F = u[0].F
    for x in u[1:]:
        F = F.join(x.F)
    u = [x.lift(F) for x in u]
    r = len(s)
    floor = _target(prec)
    if any(x.bound() == NEG_INF for x in u):
        return CInftyElem(F, 1, {}, -prec)
    q = F.q
    w = [x.bound() - sj for x, sj in zip(u, s)]
    # norm of the (i_1, ...) term is at most q^(i_1) w_1 + sum_{j>=2} q^(r-j+1) w_j
    rest = sum(q ** (r - j) * w[j] for j in range(1, r))
    imax = r
    while q ** imax * w[0] + rest > floor:
        imax += 1
    cache = {}

    def term(j, i):
        key = (j, i)
        if key not in cache:
            cache[key] = _kpl_term(s[j], u[j], i, floor)
        return cache[key]

    # partial[j][i] = sum over i > i_j > ... > i_r > 0 of the product of factors j..r-1
    partial = [dict() for _ in range(r)]
    for j in reversed(range(r)):
        for i in range(1, imax + 1):
            acc = CInftyElem(F)
            for ij in range(r - j, i):
                t = term(j, ij)
                if j < r - 1:
                    inner = partial[j + 1].get(ij)
                    if inner is None:
                        continue
                    t = (t * inner).truncate(floor)
                acc = acc + t
            partial[j][i] = acc
    total = CInftyElem(F)
    for i1 in range(r, imax):
        t = term(0, i1)
        if r > 1:
            t = (t * partial[1][i1]).truncate(floor)
        total = total + t
    return total.truncate(floor)


def _expansion(f: TPoly, n: int, t_prec: int, prec: int) -> TateElem:
    """(-1)^n f/(t - theta)^n = f/(theta - t)^n expanded in t."""
    fe = TateElem.from_tpoly(f, prec + t_prec + 1)
    return fe * geom_expand(f.tower, 0, n, t_prec)


def tdeform(f: TPoly, n: int, t_prec: int = DEFAULT_T_PREC, prec: int = DEFAULT_PREC) -> TateElem:
    """sum_{i>=1} f^(i)/(theta^(q^i) - t)^n; coefficient j is certified to theta^(-prec-j)."""
    F = f.tower
    if f.is_zero():
        return TateElem(F, [CInftyElem(F, 1, {}, -prec - j) for j in range(t_prec + 1)], -prec)
    vf = gauss_norm_exponent(f)
    if not vf < n:
        raise DomainError(f"||f|| = q^{vf} is not below q^{n}")
    q = F.q
    base = [to_series(a, prec + t_prec + 2 + max(0, a.num.deg - a.den.deg)) for a in f.c]
    norms = [x.bound() for x in base]
    acc = None
    i = 1
    while True:
        # weighted norm of the i-th summand and of everything after it
        w = max(q ** i * (nv - n) + a for a, nv in enumerate(norms) if nv != NEG_INF)
        if w <= -prec:
            break
        fi = TateElem(F, [x.frob_power(i) for x in base], NEG_INF)
        term = fi * geom_expand(F, i, n, t_prec)
        term = term.truncate_t(t_prec)
        term = TateElem(term.F, [c.truncate(-prec - j) for j, c in enumerate(term.coeffs)], term.tail)
        acc = term if acc is None else acc + term
        i += 1
    if acc is None:
        acc = TateElem(F, [CInftyElem(F) for _ in range(t_prec + 1)], NEG_INF)
    coeffs = [c.truncate(max(w - j, -prec - j)) for j, c in enumerate(acc.coeffs)]
    return TateElem(acc.F, coeffs, max(acc.tail, w))


def kmpl_system_solve(s, f: Sequence[TPoly], t_prec: int = DEFAULT_T_PREC, prec: int = DEFAULT_PREC,
                      branches=None) -> list:
    """Solve wp(F_1) = a_1, wp(F_k) = a_k F_{k-1} with a_k the expansion of (-1)^s_k f_k/(t-theta)^s_k."""
    s = IndexTuple(s)
    if len(f) != len(s):
        raise ConfigError("index and data lengths differ")
    out = []
    prev = None
    for k, (sk, fk) in enumerate(zip(s, f)):
        rhs = _expansion(fk, sk, t_prec, prec)
        if prev is not None:
            rhs = (rhs * prev).truncate_t(t_prec)
        br = branches[k] if branches else None
        Fk = wp_inverse(rhs, prec, branch=br)
        out.append(Fk)
        prev = Fk
    return out


def _const_tpoly(u, F):
    if isinstance(u, TPoly):
        return u
    return TPoly(F, [RatFunc.coerce(u, F)])


def _tower_of(xs, default=None):
    F = default
    for x in xs:
        G = getattr(x, "tower", None) or getattr(x, "F", None)
        if G is not None:
            F = G if F is None else F.join(G)
    return F


def monodromy_basis(s_tail, u_tail, t_prec: int = DEFAULT_T_PREC, prec: int = DEFAULT_PREC,
                    tower: FieldTower | None = None, branches=None) -> MonodromyBasis:
    """Lower unitriangular matrix whose columns generate the monodromy lattice.

    Column c (0-based) has 1 in row c and, below it, the solution of the
    system on the suffix data starting after position c, evaluated at theta.
    """
    s_tail = tuple(s_tail)
    r = len(s_tail) + 1
    F = _tower_of(u_tail, tower)
    if F is None:
        raise ConfigError("cannot determine the field tower")
    fs = [_const_tpoly(u, F) for u in u_tail]
    cols = []
    for c in range(r):
        col = [CInftyElem(F) for _ in range(c)] + [CInftyElem.from_int(F, 1)]
        if c < r - 1:
            sol = kmpl_system_solve(s_tail[c:], fs[c:], t_prec, prec,
                                    branches=branches[c] if branches else None)
            col += [eval_at_theta(x) for x in sol]
        cols.append(col)
    G = F
    for col in cols:
        for x in col:
            G = G.join(x.F)
    matrix = [[cols[c][row].lift(G) for c in range(r)] for row in range(r)]
    return MonodromyBasis(matrix, tuple(range(1, r + 1)))


def reduce_mod_monodromy(w, M: MonodromyBasis):
    """Canonical coset representative, clearing A-parts from the top row down."""
    r = len(M.matrix)
    if len(w) != r:
        raise ConfigError("vector and basis sizes differ")
    w = list(w)
    for i in range(r):
        red = reduce_mod_A(w[i])
        a = w[i] - red
        if not a.terms:
            continue
        a = CInftyElem(a.F, a.e, a.terms)  # exact element of A
        for k in range(i, r):
            w[k] = w[k] - a * M.matrix[k][i]
        w[i] = red
    return w


def continue_kmpl(s, u1, u_tail, t_prec: int = DEFAULT_T_PREC, prec: int = DEFAULT_PREC):
    """Analytically continued KMPL vector as a coset representative."""
    s = IndexTuple(s)
    F = _tower_of([u1, *u_tail])
    f = [_const_tpoly(u1, F)] + [_const_tpoly(u, F) for u in u_tail]
    sol = kmpl_system_solve(s, f, t_prec, prec)
    w = [eval_at_theta(x) for x in sol]
    M = monodromy_basis(s[1:], u_tail, t_prec, prec, tower=F)
    return reduce_mod_monodromy(w, M), M


def direct_kmpl_vector(s, u, prec: int = DEFAULT_PREC):
    """(Li_{s_1}(u_1), Li_{s_1,s_2}(u_1,u_2), ...) by direct series."""
    s = IndexTuple(s)
    return [kmpl_eval(s[:k], u[:k], prec) for k in range(1, len(s) + 1)]


def delta_check(n: int, u, prec: int = DEFAULT_PREC, route: str = "series"):
    """Residual exponent of Li_n(theta u) - theta Li_n(u) - Li_{n-1}(u) modulo A.

    ``route`` is "series" (direct sums, needs |u| < q^(n-1)) or "ext" / "wp"
    (continued values).
    """
    if n < 1:
        raise ConfigError("n must be positive")
    from .ext import continue_kpl, continue_kpl_wp_route
    u = to_series(u, prec + 1) if not isinstance(u, RatFunc) else u
    if route == "series":
        useries = to_series(u, prec + 1)
        if useries.bound() == NEG_INF:
            return NEG_INF
        th_u = useries.shift(1)
        a = kpl_eval(n, th_u, prec)
        b = kpl_eval(n, useries, prec + 1).shift(1)
        c = kpl_eval(n - 1, useries, prec)
    else:
        if not isinstance(u, RatFunc):
            raise ConfigError("continued routes need an element of K")
        if u.is_zero():
            return NEG_INF
        cont = continue_kpl if route == "ext" else continue_kpl_wp_route
        th_u = u * RatFunc.theta(u.tower)
        a = cont(n, th_u, prec=prec)
        b = cont(n, u, prec=prec + 1).shift(1)
        c = cont(n - 1, u, prec=prec)
    return reduce_mod_A(a - b - c).bound()
