"""Truncated Tate-algebra elements with a weighted tail bound.

A TateElem stores c_0..c_N and an exponent b with
sup_{j>N} (log_q |c_j| + j) <= b.  b = -inf means the element is a
polynomial; b = +inf means nothing is known beyond N, which still allows
Gauss-norm checks but not evaluation at t = theta.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, gcd
from typing import NamedTuple

from .errors import PrecisionError, ConfigError
from .fields import FieldTower
from .poly import TPoly, RatFunc, NEG_INF, binom_mod_p, gauss_norm_exponent, theta_norm_exponent
from .series import CInftyElem, embed_ratfunc

POS_INF = float("inf")
DEFAULT_T_PREC = 16
DEFAULT_PREC = 40


def _bound(c: CInftyElem):
    return c.bound()


class TateElem:
    __slots__ = ("F", "coeffs", "tail")

    def __init__(self, F: FieldTower, coeffs, tail=NEG_INF):
        coeffs = list(coeffs)
        for c in coeffs:
            if c.F is not F:
                F = F.join(c.F)
        self.F = F
        self.coeffs = tuple(c.lift(F) for c in coeffs)
        self.tail = tail

    @classmethod
    def zero(cls, F):
        return cls(F, [], NEG_INF)

    @classmethod
    def from_tpoly(cls, f: TPoly, prec: int = DEFAULT_PREC):
        return cls(f.tower, [embed_ratfunc(a, prec) for a in f.c], NEG_INF)

    @classmethod
    def const(cls, c: CInftyElem):
        return cls(c.F, [c], NEG_INF)

    @property
    def N(self):
        return len(self.coeffs) - 1

    def coeff(self, j):
        if j < len(self.coeffs):
            return self.coeffs[j]
        if self.tail == NEG_INF:
            return CInftyElem(self.F)
        if self.tail == POS_INF:
            raise PrecisionError(f"coefficient {j} is beyond the known truncation")
        return CInftyElem(self.F, 1, {}, ceil(self.tail - j))

    def weighted_exponent(self):
        """max_j (norm exponent of c_j + j), including the tail bound."""
        w = self.tail
        for j, c in enumerate(self.coeffs):
            w = max(w, _bound(c) + j)
        return w

    def truncate_t(self, N):
        if N >= self.N:
            return self
        t = self.tail
        for j in range(N + 1, len(self.coeffs)):
            t = max(t, _bound(self.coeffs[j]) + j)
        return TateElem(self.F, self.coeffs[:N + 1], t)

    def _pad(self, N):
        if N <= self.N:
            return self
        return TateElem(self.F, [self.coeff(j) for j in range(N + 1)], self.tail)

    def _align(self, other):
        x, y = self, other
        if x.F is not y.F:
            F = x.F.join(y.F)
            x = TateElem(F, x.coeffs, x.tail)
            y = TateElem(F, y.coeffs, y.tail)
        if x.N == y.N:
            return x, y
        if x.tail != POS_INF and y.tail != POS_INF:
            N = max(x.N, y.N)
            return x._pad(N), y._pad(N)
        N = min(x.N, y.N)
        return x.truncate_t(N), y.truncate_t(N)

    def __add__(self, other):
        x, y = self._align(other)
        return TateElem(x.F, [a + b for a, b in zip(x.coeffs, y.coeffs)], max(x.tail, y.tail))

    def __neg__(self):
        return TateElem(self.F, [-c for c in self.coeffs], self.tail)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: CInftyElem):
        b = _bound(c)
        tail = self.tail if self.tail in (NEG_INF, POS_INF) or b == NEG_INF else self.tail + b
        if b == NEG_INF:
            tail = NEG_INF if self.tail != POS_INF else POS_INF
        return TateElem(self.F, [a * c for a in self.coeffs], tail)

    def __mul__(self, other):
        if isinstance(other, CInftyElem):
            return self.scale(other)
        x, y = self._align(other)
        N = x.N
        out = []
        for k in range(N + 1):
            acc = CInftyElem(x.F)
            for i in range(k + 1):
                acc = acc + x.coeffs[i] * y.coeffs[k - i]
            out.append(acc)
        wx, wy = x.weighted_exponent(), y.weighted_exponent()
        tail = max(_add_ext(x.tail, wy), _add_ext(wx, y.tail))
        for i in range(N + 1):
            bi = _bound(x.coeffs[i]) + i
            for j in range(N + 1 - i, N + 1):
                tail = max(tail, _add_ext(bi, _bound(y.coeffs[j]) + j))
        return TateElem(x.F, out, tail)

    def shift_t(self, k):
        """Multiply by t^k."""
        zero = CInftyElem(self.F)
        tail = self.tail if self.tail in (NEG_INF, POS_INF) else self.tail
        return TateElem(self.F, [zero] * k + list(self.coeffs), tail)

    def lift(self, F):
        return TateElem(F, self.coeffs, self.tail)

    def __str__(self):
        from .textio import format_series
        parts = [f"[{format_series(c)}]*t^{j}" for j, c in enumerate(self.coeffs)]
        tail = "" if self.tail == NEG_INF else f" + O_t({self.tail})"
        return ("+".join(parts) if parts else "0") + tail

    __repr__ = __str__


def _add_ext(a, b):
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def twist(x: TateElem, k: int) -> TateElem:
    """Coefficient-wise Frobenius twist by q^k."""
    if k == 0:
        return x
    coeffs = [c.frob_power(k) for c in x.coeffs]
    if x.tail == NEG_INF:
        tail = NEG_INF
    elif k < 0 or x.tail == POS_INF:
        tail = POS_INF
    else:
        qk = x.F.q ** k
        tail = qk * x.tail - (qk - 1) * (x.N + 1)
    return TateElem(x.F, coeffs, tail)


def gauss_norm(x: TateElem):
    """Gauss-norm exponent of the known coefficients."""
    return max((c.norm_exponent() for c in x.coeffs), default=NEG_INF)


def gauss_norms(f):
    """(||f|| exponent, ||f||_theta exponent); the second needs an exact TPoly."""
    if isinstance(f, TPoly):
        return gauss_norm_exponent(f), theta_norm_exponent(f)
    return gauss_norm(f), None


def geom_expand(F: FieldTower, i: int, n: int, t_prec: int = DEFAULT_T_PREC) -> TateElem:
    """1/(theta^(q^i) - t)^n expanded in t up to t^t_prec."""
    if n == 0:
        return TateElem(F, [CInftyElem.from_int(F, 1)], NEG_INF)
    p = F.p
    qi = F.q ** i
    coeffs = []
    for j in range(t_prec + 1):
        b = binom_mod_p(j + n - 1, n - 1, p)
        coeffs.append(CInftyElem(F, 1, {-qi * (n + j): b} if b else {}))
    tail = -qi * n - (qi - 1) * (t_prec + 1)
    return TateElem(F, coeffs, tail)


def eval_at_theta(x: TateElem) -> CInftyElem:
    if x.tail == POS_INF:
        raise PrecisionError("tail bound is not finite; the element cannot be evaluated at theta")
    acc = CInftyElem(x.F)
    for j, c in enumerate(x.coeffs):
        acc = acc + c.shift(j)
    if x.tail != NEG_INF:
        acc = acc.truncate(Fraction(x.tail) if not isinstance(x.tail, Fraction) else x.tail)
    return acc


def _xi(F: FieldTower):
    """Canonical xi with xi^(q-1) = -1, adjoining F_{q^2} when necessary."""
    q = F.q
    if q == 2:
        return F, 1
    target = F if F.m % 2 == 0 else F.join(FieldTower.make(F.p, F.ell, F.fq_modulus, 2))
    minus_one = target.neg(1)
    step = (target.Q - 1) // (q * q - 1)
    cands = [target._exp[j * step] for j in range(q * q - 1)]
    roots = [z for z in cands if target.pow(z, q - 1) == minus_one]
    return target, min(roots, key=target.coords)


def omega_trunc(F: FieldTower, n_factors: int = 20, t_prec: int = DEFAULT_T_PREC,
                prec: int = DEFAULT_PREC) -> TateElem:
    """Truncation of varpi^(-q) prod_{i=1}^{n_factors} (1 - t/theta^(q^i)).

    varpi = xi theta^(1/(q-1)) with xi^(q-1) = -1, so varpi^(q-1) = -theta.
    Coefficient k keeps ``prec`` theta-digits below its leading exponent and
    carries the error of the dropped factors.
    """
    G, xi = _xi(F)
    q = G.q
    e = q - 1

    def S(k):
        return q * (q ** k - 1) // (q - 1)

    # keep prec digits per coefficient; any term using a dropped factor
    # theta^(-q^i), i > n_factors, lies below -q^(n_factors+1) - S(k-1)
    floors = [NEG_INF] + [max(-S(k) - prec, -(q ** (n_factors + 1)) - S(k - 1))
                          for k in range(1, t_prec + 1)]
    prod = [dict() for _ in range(t_prec + 1)]
    prod[0] = {0: 1}
    minus1 = G.neg(1)
    for i in range(1, n_factors + 1):
        qi = q ** i
        new = [dict(d) for d in prod]
        for k in range(1, t_prec + 1):
            src = prod[k - 1]
            dst = new[k]
            fl = floors[k]
            for a, c in src.items():
                b = a - qi
                if b <= fl:
                    continue
                v = G.add(dst.get(b, 0), G.mul(minus1, c))
                if v:
                    dst[b] = v
                else:
                    dst.pop(b, None)
        prod = new
    lead = G.inv(G.pow(xi, q))
    coeffs = []
    for k in range(t_prec + 1):
        terms = {a * e - q: G.mul(lead, c) for a, c in prod[k].items()}
        fl = NEG_INF if floors[k] == NEG_INF else floors[k] * e - q
        coeffs.append(CInftyElem(G, e, terms, fl))
    tail = Fraction(-q, e) - S(t_prec + 1) + t_prec + 1
    return TateElem(G, coeffs, tail)


class DiffEqResidual(NamedTuple):
    residual: object
    floor: object
    passes: bool


def _as_tate(x, prec):
    if isinstance(x, TateElem):
        return x
    if isinstance(x, TPoly):
        return TateElem.from_tpoly(x, prec)
    if isinstance(x, CInftyElem):
        return TateElem.const(x)
    if isinstance(x, RatFunc):
        return TateElem.const(embed_ratfunc(x, prec))
    raise TypeError(f"cannot use {x!r} as a Tate element")


def check_diff_eq(Phi, Psi, prec: int = DEFAULT_PREC) -> DiffEqResidual:
    """Residual of twist(Psi, -1) - Phi * Psi over the stored coefficients."""
    r = len(Phi)
    if any(len(row) != r for row in Phi) or len(Psi) != r or any(len(row) != len(Psi[0]) for row in Psi):
        raise ConfigError("Phi must be square and conformable with Psi")
    cols = len(Psi[0])
    Phi = [[_as_tate(a, prec) for a in row] for row in Phi]
    Psi = [[_as_tate(a, prec) for a in row] for row in Psi]
    res, fl = NEG_INF, NEG_INF
    for i in range(r):
        for j in range(cols):
            acc = twist(Psi[i][j], -1)
            for k in range(r):
                acc = acc - Phi[i][k] * Psi[k][j]
            for c in acc.coeffs:
                res = max(res, c.bound())
                fl = max(fl, c.floor_exponent())
    return DiffEqResidual(res, fl, res <= fl)
