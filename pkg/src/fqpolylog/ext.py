"""Extension classes through the model V_n, analytic continuation of KPLs,
and F_q[t]-linear relation search with lifting to field-linear relations.

A point of V_n is a column (x_{n-1}, ..., x_0); it corresponds to the
polynomial sum_j x_j (t - theta)^j modulo (t - theta)^n, and t acts by
multiplication, i.e. by theta on the diagonal and 1 on the superdiagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import NamedTuple

from .errors import ClassMismatchError, ConfigError, PrecisionError, ResourceBoundError
from .fields import FieldTower
from .poly import RatFunc, TPoly, Poly, NEG_INF, hyperderiv, gauss_norm_exponent, norm_inf, binom_mod_p
from .series import CInftyElem, reduce_mod_A
from .tate import TateElem, POS_INF, eval_at_theta, DEFAULT_PREC
from .wp import wp_inverse
from .polylog import kpl_eval, _expansion

SMALL_GEN_CAP = 256
DEFAULT_DEG_BOUND = 8


@dataclass(frozen=True)
class ExtPoint:
    n: int
    entries: tuple  # (x_{n-1}, ..., x_0)

    def __post_init__(self):
        if self.n < 1 or len(self.entries) != self.n:
            raise ConfigError("an ExtPoint needs n >= 1 entries")

    @property
    def tower(self):
        F = None
        for x in self.entries:
            F = x.tower if F is None else F.join(x.tower)
        return F

    @classmethod
    def from_low_first(cls, xs):
        return cls(len(xs), tuple(reversed(list(xs))))

    def low_first(self):
        return list(reversed(self.entries))

    def is_zero(self):
        return all(x.is_zero() for x in self.entries)

    def to_poly(self) -> TPoly:
        """The representative sum_j x_j (t - theta)^j of degree < n."""
        return TPoly.from_expansion_at_theta(self.tower, self.low_first())

    def __add__(self, other):
        return ExtPoint(self.n, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __str__(self):
        return "(" + ", ".join(x.to_str() for x in self.entries) + ")"


def kpl_point(u, n: int, tower: FieldTower | None = None) -> ExtPoint:
    """The point (0, ..., 0, (-1)^n u) attached to u."""
    u = RatFunc.coerce(u, tower) if tower is not None or not isinstance(u, RatFunc) else u
    zero = RatFunc.from_int(u.tower, 0)
    x0 = -u if n % 2 else u
    return ExtPoint(n, tuple([zero] * (n - 1) + [x0]))


def vpoint_from_poly(f: TPoly, n: int, prec: int = DEFAULT_PREC):
    """(v, G): the point of f, and for deg f >= n a Tate element G with
    f - (G^(-1) - G)(t - theta)^n of degree < n (None otherwise)."""
    xs = f.expansion_at_theta()
    zero = RatFunc.from_int(f.tower, 0)
    low = (xs + [zero] * n)[:n]
    v = ExtPoint.from_low_first(low)
    if len(xs) <= n:
        return v, None
    R = TPoly.from_expansion_at_theta(f.tower, xs[n:])
    return v, wp_inverse(TateElem.from_tpoly(R, prec), prec)


def _theta_values(a: TPoly, n: int):
    return [hyperderiv(a, j).eval_theta() for j in range(n)]


def t_action(a: TPoly, v: ExtPoint) -> ExtPoint:
    """[a]_n v = sum_j (d^j a)(theta) N^j v."""
    n = v.n
    h = _theta_values(a, n)
    x = v.low_first()
    zero = RatFunc.from_int(v.tower.join(a.tower), 0)
    out = []
    for j in range(n):
        acc = zero
        for i in range(j + 1):
            if not h[i].is_zero() and not x[j - i].is_zero():
                acc = acc + h[i] * x[j - i]
        out.append(acc)
    return ExtPoint.from_low_first(out)


def t_inverse_action(v: ExtPoint, a: TPoly | None = None) -> ExtPoint:
    """Solve [a]_n w = v (a = t by default)."""
    if a is None:
        a = TPoly.t(v.tower)
    n = v.n
    h = _theta_values(a, n)
    if h[0].is_zero():
        raise ZeroDivisionError("[a]_n is not invertible: a(theta) = 0")
    h0inv = h[0].inverse()
    y = v.low_first()
    x = []
    for j in range(n):
        acc = y[j]
        for i in range(1, j + 1):
            if not h[i].is_zero():
                acc = acc - h[i] * x[j - i]
        x.append(acc * h0inv)
    return ExtPoint.from_low_first(x)


def small_generate(v: ExtPoint, cap: int = SMALL_GEN_CAP):
    """Least l with ||G_l|| < q^n, where G_l represents [t]^(-l) v; returns (l, G_l)."""
    n = v.n
    cur = v
    for ell in range(cap + 1):
        G = cur.to_poly()
        if gauss_norm_exponent(G) < n:
            return ell, G
        cur = t_inverse_action(cur)
    raise ResourceBoundError(f"no small generator within {cap} steps")


def _divide_t_minus_theta(f: TPoly, n: int) -> TPoly:
    cur = f
    for _ in range(n):
        cur, r = cur.divmod_t_minus_theta()
        if not r.is_zero():
            raise ClassMismatchError("numerator is not divisible by (t - theta)^n")
    return cur


def _as_tpoly(f, tower=None):
    if isinstance(f, TPoly):
        return f
    x = RatFunc.coerce(f, tower)
    return TPoly(x.tower, [x])


def class_quotient(f, g, ell: int, n: int) -> TPoly:
    """((-1)^n f - (-1)^n t^l g) / (t - theta)^n, checked to be exact."""
    f = _as_tpoly(f, getattr(g, "tower", None))
    g = _as_tpoly(g, f.tower)
    num = f - g.shift(ell)
    if n % 2:
        num = -num
    return _divide_t_minus_theta(num, n)


def class_correction(f, g, ell: int, n: int, prec: int = DEFAULT_PREC, branch=None) -> TateElem:
    """Canonical B with B^(-1) - B equal to the class quotient, so that
    L_{f,n} = t^l L_{g,n} + B."""
    Q = class_quotient(f, g, ell, n)
    return wp_inverse(TateElem.from_tpoly(Q, prec + Q.deg + 2), prec, branch=branch)


class Continuation(NamedTuple):
    value: CInftyElem
    ell: int
    g: TPoly | None
    B: TateElem


def _coerce_u(u, tower=None):
    if isinstance(u, RatFunc):
        return u
    if isinstance(u, (Poly,)):
        return RatFunc(u)
    if tower is None:
        raise ConfigError("need a field tower to interpret the argument")
    return RatFunc.coerce(u, tower)


def kpl_pipeline(n: int, u, prec: int = DEFAULT_PREC, tower: FieldTower | None = None) -> Continuation:
    """Continuation through the small generator of the class of u."""
    u = _coerce_u(u, tower)
    F = u.tower
    if n == 0:
        B = wp_inverse(TateElem.from_tpoly(_as_tpoly(u), prec + 2), prec)
        return Continuation(reduce_mod_A(eval_at_theta(B)), 0, None, B)
    if u.is_zero():
        B = TateElem.zero(F)
        return Continuation(CInftyElem(F, 1, {}, -prec), 0, TPoly(F), B)
    v = kpl_point(u, n)
    ell, G = small_generate(v)
    g = -G if n % 2 else G
    B = class_correction(u, g, ell, n, prec)
    acc = eval_at_theta(B)
    for j, gj in enumerate(g.c):
        if gj.is_zero():
            continue
        acc = acc + kpl_eval(n, gj, prec + ell + j).shift(ell + j)
    return Continuation(reduce_mod_A(acc).truncate(-prec), ell, g, B)


def continue_kpl(n: int, u, prec: int = DEFAULT_PREC, tower: FieldTower | None = None) -> CInftyElem:
    return kpl_pipeline(n, u, prec, tower).value


def wp_route_t_prec(n: int, u_norm, q: int, prec: int) -> int:
    """Smallest t-truncation whose certified tail reaches theta^(-prec).

    The solution tail is q b - (q-1)(N+1) with b = log|u| - n, valid once N+1 > b.
    """
    b = u_norm - n
    need = max(ceil(Fraction(prec + q * b, q - 1)), (int(b) + 1) if b >= 0 else 1)
    return max(need - 1, 0)


def continue_kpl_wp_route(n: int, u, t_prec: int | None = None, prec: int = DEFAULT_PREC,
                          tower: FieldTower | None = None) -> CInftyElem:
    """Continuation by solving the wp-equation coefficient-wise in t."""
    u = _coerce_u(u, tower)
    F = u.tower
    if u.is_zero():
        return CInftyElem(F, 1, {}, -prec)
    need = wp_route_t_prec(n, norm_inf(u), F.q, prec)
    if t_prec is None:
        t_prec = need
    g = _expansion(_as_tpoly(u), n, t_prec, prec)
    sol = wp_inverse(g, prec)
    if sol.tail == POS_INF or sol.tail > -prec:
        raise PrecisionError(f"tail decay not certified at t_prec={t_prec}; use at least {need}")
    return reduce_mod_A(eval_at_theta(sol)).truncate(-prec)


# --- relations ----------------------------------------------------------------------

def _rref_kernel(rows, ncols, B: FieldTower):
    """Basis of the right kernel of ``rows`` over the field B (codes)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = B.inv(mat[r][c])
        mat[r] = [B.mul(inv, x) for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [B.sub(x, B.mul(f, y)) for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = B.neg(mat[i][fc])
        basis.append(vec)
    return basis


class _Echelon:
    """Incremental echelon basis for span membership over B."""

    def __init__(self, B):
        self.B = B
        self.rows = {}  # pivot column -> row with 1 at pivot

    def reduce(self, vec):
        B = self.B
        vec = list(vec)
        for c in sorted(self.rows):
            if vec[c]:
                f = vec[c]
                vec = [B.sub(x, B.mul(f, y)) for x, y in zip(vec, self.rows[c])]
        return vec

    def add(self, vec):
        vec = self.reduce(vec)
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            return False
        inv = self.B.inv(vec[piv])
        vec = [self.B.mul(inv, x) for x in vec]
        for c, row in list(self.rows.items()):
            if row[piv]:
                f = row[piv]
                self.rows[c] = [self.B.sub(x, self.B.mul(f, y)) for x, y in zip(row, vec)]
        self.rows[piv] = vec
        return True


@dataclass
class RelationCertificate:
    q: int
    p: int
    n: int
    u_list: list
    coefficients: list          # TPoly over F_q
    deg_bound: int | None = None
    B: TateElem | None = None
    residual_exponent: object = None
    floor_exponent: object = None
    prec: int = DEFAULT_PREC
    meta: dict = field(default_factory=dict)

    @property
    def degree(self):
        return max(a.deg for a in self.coefficients)

    def to_record(self):
        from .textio import format_series
        tower = self.B.F if self.B is not None else self.u_list[0].tower
        rec = {
            "kind": "relation",
            "q": self.q,
            "p": self.p,
            "fq_modulus": list(tower.fq_modulus),
            "m": tower.m,
            "n": self.n,
            "u_list": [u.to_str() for u in self.u_list],
            "coefficients": [a.to_str() for a in self.coefficients],
            "deg_bound": self.deg_bound,
            "B": [format_series(c) for c in self.B.coeffs] if self.B is not None else None,
            "residual_exponent": _exp_text(self.residual_exponent),
            "floor_exponent": _exp_text(self.floor_exponent),
            "prec": self.prec,
        }
        return rec

    @classmethod
    def from_record(cls, rec):
        from .textio import parse_ratfunc, parse_tpoly, parse_series
        base = FieldTower.make(_prime_of(rec["q"], rec["p"]), _ell_of(rec["q"], rec["p"]), tuple(rec["fq_modulus"]), 1)
        big = FieldTower.make(base.p, base.ell, base.fq_modulus, rec.get("m", 1))
        u_list = [parse_ratfunc(s, base) for s in rec["u_list"]]
        coeffs = [parse_tpoly(s, base) for s in rec["coefficients"]]
        B = None
        if rec.get("B") is not None:
            B = TateElem(big, [parse_series(s, big) for s in rec["B"]], NEG_INF)
        return cls(rec["q"], rec["p"], rec["n"], u_list, coeffs, rec.get("deg_bound"), B,
                   _exp_parse(rec.get("residual_exponent")), _exp_parse(rec.get("floor_exponent")),
                   rec.get("prec", DEFAULT_PREC))


def _prime_of(q, p):
    return p


def _ell_of(q, p):
    ell, x = 0, q
    while x > 1:
        x //= p
        ell += 1
    return ell


def _exp_text(x):
    if x is None:
        return None
    if x == NEG_INF:
        return "-inf"
    return str(Fraction(x))


def _exp_parse(s):
    if s is None:
        return None
    if s == "-inf":
        return NEG_INF
    return Fraction(s)


def _common_tower(u_list):
    F = None
    for u in u_list:
        F = u.tower if F is None else F.join(u.tower)
    return F


def _relation_rows(u_list, n, d, D, F):
    """Linear equations over F_q in the unknown coefficients of a_i (deg <= d)."""
    B = F.base
    L = len(u_list)
    den = Poly.const(F, 1)
    for u in u_list:
        den = (den * u.den).divmod(den.gcd(u.den))[0]
    P = [u.num * den.divmod(u.den)[0] for u in u_list]
    ncols = L * (D + 1)
    rows = {}
    p = F.p
    for j in range(n):
        for i in range(L):
            for k in range(j, d + 1):
                b = binom_mod_p(k, j, p)
                if not b:
                    continue
                for ex, c in enumerate(P[i].c):
                    if not c:
                        continue
                    coords = F.fq_coords(F.mul(F.from_int(b), c))
                    for s, val in enumerate(coords):
                        if val:
                            key = (j, ex + k - j, s)
                            row = rows.setdefault(key, [0] * ncols)
                            row[i * (D + 1) + k] = B.add(row[i * (D + 1) + k], val)
    return [rows[k] for k in sorted(rows)], ncols


def _vec_to_tpolys(vec, L, D, F):
    B = F.base
    out = []
    for i in range(L):
        cs = [RatFunc.const(F.base, vec[i * (D + 1) + k]) for k in range(D + 1)]
        out.append(TPoly(B, cs))
    return out


def _normalize_relation(vec, L, D, B):
    for i in range(L):
        block = vec[i * (D + 1):(i + 1) * (D + 1)]
        nz = [k for k, x in enumerate(block) if x]
        if nz:
            inv = B.inv(block[nz[-1]])
            return [B.mul(inv, x) for x in vec]
    return vec


def relation_search(u_list, n: int, deg_bound: int = DEFAULT_DEG_BOUND, tower: FieldTower | None = None):
    """Generators of the F_q[t]-relations sum [a_i]_n v_{u_i} = 0 with deg a_i <= deg_bound.

    An empty list certifies that no relation exists up to the degree bound.
    """
    u_list = [_coerce_u(u, tower) for u in u_list]
    F = _common_tower(u_list)
    u_list = [u.lift(F) for u in u_list]
    B = F.base
    L = len(u_list)
    D = deg_bound
    span = _Echelon(B)
    gens = []
    for d in range(D + 1):
        # t-shifts of earlier generators that still fit in degree d
        for vec, deg in gens:
            s = d - deg
            if s > 0:
                shifted = [0] * (L * (D + 1))
                for i in range(L):
                    for k in range(D + 1 - s):
                        shifted[i * (D + 1) + k + s] = vec[i * (D + 1) + k]
                span.add(shifted)
        rows, ncols = _relation_rows(u_list, n, d, D, F)
        allowed = [c for c in range(ncols) if c % (D + 1) <= d]
        sub_rows = [[r[c] for c in allowed] for r in rows]
        for kv in _rref_kernel(sub_rows, len(allowed), B):
            vec = [0] * ncols
            for c, x in zip(allowed, kv):
                vec[c] = x
            red = span.reduce(vec)
            if any(red):
                red = _normalize_relation(red, L, D, B)
                span.add(red)
                gens.append((red, d))
    certs = []
    for vec, deg in gens:
        coeffs = _vec_to_tpolys(vec, L, D, F)
        certs.append(RelationCertificate(F.q, F.p, n, list(u_list), coeffs, deg_bound))
    return certs


def check_module_relation(coeffs, u_list, n) -> bool:
    """True when sum [a_i]_n v_{u_i} = 0 exactly."""
    acc = None
    for a, u in zip(coeffs, u_list):
        w = t_action(a, kpl_point(u, n))
        acc = w if acc is None else acc + w
    return acc is not None and acc.is_zero()


def relation_quotient(coeffs, u_list, n) -> TPoly:
    F = _common_tower(u_list)
    num = TPoly(F)
    sign = -1 if n % 2 else 1
    for a, u in zip(coeffs, u_list):
        num = num + a.lift(F) * TPoly(F, [u * sign])
    return _divide_t_minus_theta(num, n)


def lift_relation(coeffs, u_list, n: int, prec: int = DEFAULT_PREC, deg_bound=None,
                  verify: bool = True, tower: FieldTower | None = None) -> RelationCertificate:
    """B with B^(-1) - B = sum a_i (-1)^n u_i / (t - theta)^n, so that
    sum a_i(theta) Li(u_i) - B(theta) lies in A."""
    u_list = [_coerce_u(u, tower) for u in u_list]
    F = _common_tower(u_list)
    u_list = [u.lift(F) for u in u_list]
    coeffs = [_as_tpoly(a, F.base) for a in coeffs]
    if not check_module_relation(coeffs, u_list, n):
        raise ClassMismatchError("coefficients do not give a relation between the points")
    Q = relation_quotient(coeffs, u_list, n)
    extra = max((a.deg for a in coeffs), default=0)
    Bt = wp_inverse(TateElem.from_tpoly(Q, prec + Q.deg + 2), prec + extra)
    cert = RelationCertificate(F.q, F.p, n, u_list, coeffs, deg_bound, Bt, prec=prec)
    if verify:
        res = verify_relation(cert, prec)
        cert.residual_exponent = res.residual
        cert.floor_exponent = res.floor
    return cert


class VerifyResult(NamedTuple):
    residual: object
    floor: object
    passes: bool


def _li_value(n, u, prec):
    """Li_n(u) modulo A: direct series in the disc, the wp route outside it."""
    if norm_inf(u) < n:
        return kpl_eval(n, u, prec)
    return continue_kpl_wp_route(n, u, prec=prec)


def verify_relation(cert: RelationCertificate, prec: int | None = None) -> VerifyResult:
    """Recompute the values and reduce sum a_i(theta) Li(u_i) - B(theta) modulo A."""
    prec = (cert.prec + 10) if prec is None else prec
    extra = max((a.deg for a in cert.coefficients), default=0)
    F = _common_tower(cert.u_list)
    acc = CInftyElem(F)
    for a, u in zip(cert.coefficients, cert.u_list):
        if a.is_zero():
            continue
        val = _li_value(cert.n, u, prec + extra)
        a_th = CInftyElem.from_poly(a.eval_theta().num)
        acc = acc + a_th * val
    if cert.B is not None:
        acc = acc - eval_at_theta(cert.B)
    red = reduce_mod_A(acc)
    res = red.bound()
    fl = red.floor_exponent()
    return VerifyResult(res, fl, bool(res <= fl) if res != NEG_INF else True)
