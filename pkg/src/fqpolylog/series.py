"""Truncated, finitely ramified Laurent series in 1/theta approximating C_inf.

A :class:`CInftyElem` stores terms ``c * theta^(a/e)`` for integer numerators
``a`` above a precision floor: every stored term is exact and the unknown
remainder has norm at most ``q^(floor/e)``.

Artin-Schreier roots of inputs with positive exponents have expansions whose
exponents accumulate (for example y^q - y = theta has the root
sum_{i>=1} theta^(q^-i)).  Such pieces are kept symbolically as *tails*
``theta^s * T(a theta^r)`` with ``T(c) = sum_{i>=1} c^(q^-i)``, normalised so
that q^-2 < r <= q^-1.  Tails support addition, scaling by F_q-rational
monomials and Frobenius twists, which is all the continuation pipeline needs.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, ceil

from .errors import PrecisionError, UnsupportedTailError
from .fields import FieldTower
from .poly import Poly, RatFunc, NEG_INF


def _lcm(a, b):
    return a * b // gcd(a, b)


def _ceil_frac(x):
    return x if x == NEG_INF else ceil(x)


class CInftyElem:
    __slots__ = ("F", "e", "terms", "floor", "tails")

    def __init__(self, F: FieldTower, e: int = 1, terms=None, floor=NEG_INF, tails=None, _clean=False):
        self.F = F
        self.e = e
        terms = dict(terms) if terms else {}
        if not _clean:
            terms = {a: c for a, c in terms.items() if c and a > floor}
        self.terms = terms
        self.floor = floor
        self.tails = dict(tails) if tails else {}
        if not _clean:
            self._normalize_e()

    # --- construction -----------------------------------------------------------
    @classmethod
    def zero(cls, F, floor=NEG_INF, e=1):
        return cls(F, e, {}, floor)

    @classmethod
    def const(cls, F, c):
        return cls(F, 1, {0: c} if c else {})

    @classmethod
    def monomial(cls, F, c, exponent):
        exponent = Fraction(exponent)
        return cls(F, exponent.denominator, {exponent.numerator: c} if c else {})

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p.tower, 1, {d: c for d, c in enumerate(p.c) if c})

    @classmethod
    def from_int(cls, F, n):
        return cls.const(F, F.from_int(n))

    def _normalize_e(self):
        e = self.e
        if e == 1:
            return
        g = e
        for a in self.terms:
            g = gcd(g, a)
            if g == 1:
                return
        if self.floor != NEG_INF:
            g = gcd(g, self.floor)
        if g > 1:
            self.e = e // g
            self.terms = {a // g: c for a, c in self.terms.items()}
            if self.floor != NEG_INF:
                self.floor //= g

    def with_e(self, E):
        """Same element with exponent denominator E (a multiple of e)."""
        if E == self.e:
            return self
        k = E // self.e
        fl = self.floor if self.floor == NEG_INF else self.floor * k
        return CInftyElem(self.F, E, {a * k: c for a, c in self.terms.items()}, fl, self.tails, _clean=True)

    def lift(self, F):
        if F is self.F:
            return self
        src = self.F
        tails = {k: src.lift(a, F) for k, a in self.tails.items()}
        return CInftyElem(F, self.e, {a: src.lift(c, F) for a, c in self.terms.items()}, self.floor, tails, _clean=True)

    def _common(self, other):
        if isinstance(other, int):
            other = CInftyElem.from_int(self.F, other)
        x, y = self, other
        if x.F is not y.F:
            F = x.F.join(y.F)
            x, y = x.lift(F), y.lift(F)
        if x.e != y.e:
            E = _lcm(x.e, y.e)
            x, y = x.with_e(E), y.with_e(E)
        return x, y

    # --- inspection -------------------------------------------------------------
    def is_exact(self):
        return self.floor == NEG_INF

    def top(self):
        """Largest explicit exponent numerator, or None."""
        return max(self.terms) if self.terms else None

    def leading(self):
        a = self.top()
        return (a, self.terms[a]) if a is not None else (None, 0)

    def tail_sup(self):
        """Largest exponent occurring in the symbolic tails."""
        q = self.F.q
        return max((s + r / q for (s, r) in self.tails), default=NEG_INF)

    def norm_exponent(self):
        """Norm exponent of the known part (Fraction), -inf if no terms survive."""
        a = self.top()
        v = Fraction(a, self.e) if a is not None else NEG_INF
        return max(v, self.tail_sup())

    def floor_exponent(self):
        return self.floor if self.floor == NEG_INF else Fraction(self.floor, self.e)

    def bound(self):
        """Certified upper bound on the norm exponent of the true value."""
        return max(self.norm_exponent(), self.floor_exponent())

    def is_zero_at_precision(self):
        return not self.terms and not self.tails

    def coeff(self, exponent):
        exponent = Fraction(exponent)
        a = exponent * self.e
        if a.denominator != 1:
            return 0
        return self.terms.get(int(a), 0)

    def items(self):
        """(Fraction exponent, code) pairs, descending."""
        return [(Fraction(a, self.e), self.terms[a]) for a in sorted(self.terms, reverse=True)]

    # --- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        x, y = self._common(other)
        F = x.F
        fl = max(x.floor, y.floor)
        terms = {a: c for a, c in x.terms.items() if a > fl}
        for a, c in y.terms.items():
            if a > fl:
                s = F.add(terms.get(a, 0), c)
                if s:
                    terms[a] = s
                else:
                    terms.pop(a, None)
        tails = _merge_tails(F, x.tails, y.tails)
        return CInftyElem(F, x.e, terms, fl, tails)

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return CInftyElem(F, self.e, {a: F.neg(c) for a, c in self.terms.items()}, self.floor,
                          {k: F.neg(a) for k, a in self.tails.items()}, _clean=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = CInftyElem.from_int(self.F, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        """Multiply by a field constant (code)."""
        F = self.F
        if c == 0:
            return CInftyElem(F, self.e, {}, self.floor)
        tails = {}
        if self.tails:
            if not F.is_fq(c):
                raise UnsupportedTailError("tails can only be scaled by F_q constants")
            tails = {k: F.mul(c, a) for k, a in self.tails.items()}
        return CInftyElem(F, self.e, {a: F.mul(c, v) for a, v in self.terms.items()}, self.floor, tails, _clean=True)

    def shift(self, exponent):
        """Multiply by theta^exponent (exact)."""
        exponent = Fraction(exponent)
        x = self
        E = _lcm(x.e, exponent.denominator)
        x = x.with_e(E)
        d = int(exponent * E)
        fl = x.floor if x.floor == NEG_INF else x.floor + d
        tails = {(s + exponent, r): a for (s, r), a in x.tails.items()}
        return CInftyElem(x.F, E, {a + d: c for a, c in x.terms.items()}, fl, tails)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.F.from_int(other))
        x, y = self._common(other)
        F = x.F
        if x.tails and y.tails:
            raise UnsupportedTailError("product of two symbolic tails")
        fl = NEG_INF
        if x.floor != NEG_INF:
            fl = max(fl, x.floor + _ceil_frac(y.bound() * x.e))
        if y.floor != NEG_INF:
            fl = max(fl, y.floor + _ceil_frac(x.bound() * x.e))
        out = {}
        for a, c in x.terms.items():
            for b, d in y.terms.items():
                s = a + b
                if s > fl:
                    v = F.add(out.get(s, 0), F.mul(c, d))
                    if v:
                        out[s] = v
                    else:
                        out.pop(s, None)
        res = CInftyElem(F, x.e, out, fl)
        if x.tails:
            res = res + _tails_times(y, x.tails, fl, x.e)
        if y.tails:
            res = res + _tails_times(x, y.tails, fl, x.e)
        return res

    __rmul__ = __mul__

    def truncate(self, floor_exponent):
        """Forget everything at or below theta^floor_exponent."""
        if floor_exponent == NEG_INF:
            return self
        f = Fraction(floor_exponent)
        E = _lcm(self.e, f.denominator)
        x = self.with_e(E)
        fl = max(x.floor, int(f * E))
        return CInftyElem(x.F, E, x.terms, fl, x.tails)

    def frob_power(self, k=1):
        """x^(q^k) for k >= 0 (exact in characteristic p)."""
        if k < 0:
            out = self
            for _ in range(-k):
                out = qth_root_series(out)
            return out
        if k == 0:
            return self
        F = self.F
        qk = F.q ** k
        fl = self.floor if self.floor == NEG_INF else self.floor * qk
        res = CInftyElem(F, self.e, {a * qk: F.frob(c, k) for a, c in self.terms.items()}, fl)
        if self.tails:
            tails = self.tails
            for _ in range(k):
                tails, extra = _tails_pow_q(F, tails)
                res = res + extra
            res = res + CInftyElem(F, 1, {}, NEG_INF, tails)
        return res

    def equal_mod_A(self, other):
        """Three-valued comparison of cosets modulo A: True, False or None."""
        d = reduce_mod_A(self - other)
        if d.terms or d.tails:
            return False
        return True if d.is_exact() else None

    def __eq__(self, other):
        if not isinstance(other, CInftyElem):
            return NotImplemented
        x, y = self._common(other)
        return x.terms == y.terms and x.floor == y.floor and x.tails == y.tails

    def __hash__(self):
        return hash((self.e, tuple(sorted(self.terms.items())), self.floor))

    def __str__(self):
        from .textio import format_series
        return format_series(self)

    def __repr__(self):
        return f"CInftyElem({self})"


# --- tails ----------------------------------------------------------------------

def _merge_tails(F, t1, t2):
    if not t2:
        return dict(t1)
    out = dict(t1)
    for k, a in t2.items():
        v = F.add(out.get(k, 0), a)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _explicit(F, pairs):
    """CInftyElem from (Fraction exponent, code) pairs."""
    if not pairs:
        return CInftyElem(F)
    E = 1
    for ex, _ in pairs:
        E = _lcm(E, ex.denominator)
    terms = {}
    for ex, c in pairs:
        a = int(ex * E)
        v = F.add(terms.get(a, 0), c)
        if v:
            terms[a] = v
        else:
            terms.pop(a, None)
    return CInftyElem(F, E, terms)


def make_tail(F, s, r, a):
    """theta^s * T(a theta^r), normalised; returns (tails dict, explicit part)."""
    s, r = Fraction(s), Fraction(r)
    q = F.q
    lo, hi = Fraction(1, q * q), Fraction(1, q)
    pairs = []
    if a == 0:
        return {}, CInftyElem(F)
    if r <= 0:
        raise ValueError("tail arguments need a positive exponent")
    while r > hi:
        a = F.frob(a, -1)
        r = r / q
        pairs.append((s + r, a))
    while r <= lo:
        pairs.append((s + r, F.neg(a)))
        a = F.frob(a, 1)
        r = r * q
    return {(s, r): a}, _explicit(F, pairs)


def tail_elem(F, s, r, a):
    tails, explicit = make_tail(F, s, r, a)
    return explicit + CInftyElem(F, 1, {}, NEG_INF, tails)


def _tails_pow_q(F, tails):
    q = F.q
    out = {}
    pairs = []
    for (s, r), a in tails.items():
        pairs.append((q * s + r, a))
        out = _merge_tails(F, out, {(q * s, r): a})
    return out, _explicit(F, pairs)


def _tails_qth_root(F, tails):
    q = F.q
    out = {}
    pairs = []
    for (s, r), a in tails.items():
        pairs.append(((s + r) / q, F.neg(F.frob(a, -1))))
        out = _merge_tails(F, out, {(s / q, r): a})
    return out, _explicit(F, pairs)


def _tails_times(x, tails, fl, E):
    """x * (sum of tails), for x with F_q-rational explicit coefficients."""
    F = x.F
    out = {}
    for a, c in x.terms.items():
        if not F.is_fq(c):
            raise UnsupportedTailError("tails can only be multiplied by F_q-rational series")
        ex = Fraction(a, x.e)
        for (s, r), b in tails.items():
            out = _merge_tails(F, out, {(s + ex, r): F.mul(c, b)})
    res = CInftyElem(F, E, {}, fl)
    return res + CInftyElem(F, 1, {}, NEG_INF, out)


# --- operations -----------------------------------------------------------------

def embed_ratfunc(x: RatFunc, prec: int = 40) -> CInftyElem:
    """Laurent expansion at 1/theta; polynomials are embedded exactly."""
    F = x.tower
    if x.is_zero():
        return CInftyElem(F)
    if x.den.deg == 0:
        return CInftyElem.from_poly(x.num)
    if prec < 1:
        raise ValueError("prec must be positive")
    top = x.num.deg - x.den.deg
    # reversed polynomials in s = 1/theta
    nrev = list(reversed(x.num.c))
    drev = list(reversed(x.den.c))  # drev[0] = 1 (monic)
    quo = []
    for i in range(prec):
        acc = nrev[i] if i < len(nrev) else 0
        for j in range(1, min(i, len(drev) - 1) + 1):
            if drev[j] and quo[i - j]:
                acc = F.sub(acc, F.mul(drev[j], quo[i - j]))
        quo.append(acc)
    terms = {top - i: c for i, c in enumerate(quo) if c}
    return CInftyElem(F, 1, terms, top - prec)


def to_series(x, prec=40):
    """Coerce ints, field elements, Poly, RatFunc or CInftyElem into a series."""
    from .fields import FFElem
    if isinstance(x, CInftyElem):
        return x
    if isinstance(x, RatFunc):
        return embed_ratfunc(x, prec)
    if isinstance(x, Poly):
        return CInftyElem.from_poly(x)
    if isinstance(x, FFElem):
        return CInftyElem.const(x.tower, x.code)
    raise TypeError(f"cannot embed {x!r}")


def series_inv(x: CInftyElem, prec: int = 40) -> CInftyElem:
    """Inverse with the propagated precision; exact inputs use ``prec`` relative digits."""
    if x.tails:
        raise UnsupportedTailError("inverse of an element with symbolic tails")
    F = x.F
    v, c = x.leading()
    if v is None:
        raise PrecisionError("inverse of an element indistinguishable from zero")
    e = x.e
    if x.floor == NEG_INF:
        depth = prec * e
    else:
        depth = v - x.floor
    floor_inv = -v - depth
    cinv = F.inv(c)
    # x = c theta^v (1 + r), r = sum_{d>0} r_d theta^(-d/e)
    r = {v - a: F.mul(cinv, b) for a, b in x.terms.items() if a != v}
    rk = sorted(r.items())
    w = {0: 1}
    for d in range(1, depth):
        acc = 0
        for k, rv in rk:
            if k > d:
                break
            wv = w.get(d - k)
            if wv:
                acc = F.sub(acc, F.mul(rv, wv))
        if acc:
            w[d] = acc
    terms = {-v - d: F.mul(cinv, wv) for d, wv in w.items()}
    return CInftyElem(F, e, terms, floor_inv)


def qth_root_series(x: CInftyElem) -> CInftyElem:
    """The unique y with y^q = x: exponents divided by q, coefficients by Frobenius^-1."""
    F = x.F
    q = F.q
    res = CInftyElem(F, x.e * q, {a: F.frob(c, -1) for a, c in x.terms.items()}, x.floor)
    if x.tails:
        tails, extra = _tails_qth_root(F, x.tails)
        res = res + extra + CInftyElem(F, 1, {}, NEG_INF, tails)
    return res


def reduce_mod_A(x: CInftyElem) -> CInftyElem:
    """Canonical representative of x + A (F_q-parts of theta^k, k >= 0, removed)."""
    F = x.F
    terms = {}
    for a, c in x.terms.items():
        if a >= 0 and a % x.e == 0:
            c = F.sub(c, F.fq_component(c))
        if c:
            terms[a] = c
    return CInftyElem(F, x.e, terms, x.floor, x.tails, _clean=True)


def residual_mod_A(x: CInftyElem, y: CInftyElem):
    """Certified bound on the norm exponent of reduce_mod_A(x - y)."""
    return reduce_mod_A(x - y).bound()


def series_pow(x: CInftyElem, n: int, prec: int = 40) -> CInftyElem:
    if n < 0:
        return series_pow(series_inv(x, prec), -n, prec)
    out = CInftyElem.from_int(x.F, 1)
    base = x
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out
