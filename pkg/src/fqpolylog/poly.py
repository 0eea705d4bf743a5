"""Exact polynomials in theta, rational functions in K = F_q(theta), and K[t].

Coefficients are codes of a :class:`FieldTower`; every object carries its tower
and mixed-tower arithmetic lifts both sides to the joined tower.
"""
from __future__ import annotations

from .fields import FieldTower, FFElem

NEG_INF = float("-inf")
ZERO_DEGREE = -1


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        num = den = 1
        for i in range(b):
            num = num * (a - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return out


def _join(a, b):
    if a.tower is b.tower:
        return a, b
    t = a.tower.join(b.tower)
    return a.lift(t), b.lift(t)


class Poly:
    """Polynomial in theta over a tower; coefficient codes lowest degree first."""

    __slots__ = ("tower", "c")

    def __init__(self, tower: FieldTower, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.tower = tower
        self.c = tuple(c)

    @classmethod
    def const(cls, tower, a):
        return cls(tower, [a])

    @classmethod
    def theta(cls, tower):
        return cls(tower, [0, 1])

    @classmethod
    def monomial(cls, tower, a, d):
        return cls(tower, [0] * d + [a])

    def lift(self, tower):
        if tower is self.tower:
            return self
        return Poly(tower, [self.tower.lift(x, tower) for x in self.c])

    @property
    def deg(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lead(self):
        return self.c[-1] if self.c else 0

    def __add__(self, other):
        a, b = _join(self, other)
        F = a.tower
        n = max(len(a.c), len(b.c))
        x = a.c + (0,) * (n - len(a.c))
        y = b.c + (0,) * (n - len(b.c))
        return Poly(F, [F.add(u, v) for u, v in zip(x, y)])

    def __neg__(self):
        return Poly(self.tower, [self.tower.neg(u) for u in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = _join(self, other)
        F = a.tower
        if not a.c or not b.c:
            return Poly(F)
        out = [0] * (len(a.c) + len(b.c) - 1)
        for i, u in enumerate(a.c):
            if u:
                for j, v in enumerate(b.c):
                    if v:
                        out[i + j] = F.add(out[i + j], F.mul(u, v))
        return Poly(F, out)

    def scale(self, a):
        F = self.tower
        return Poly(F, [F.mul(a, u) for u in self.c])

    def divmod(self, other):
        a, b = _join(self, other)
        F = a.tower
        if not b.c:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(a.c)
        inv = F.inv(b.c[-1])
        db = len(b.c) - 1
        quo = [0] * max(len(rem) - db, 0)
        for shift in reversed(range(len(quo))):
            top = rem[shift + db]
            if top:
                c = F.mul(top, inv)
                quo[shift] = c
                for i, y in enumerate(b.c):
                    rem[shift + i] = F.sub(rem[shift + i], F.mul(c, y))
        return Poly(F, quo), Poly(F, rem[:db] if db > 0 else [])

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.tower.inv(self.c[-1]))

    def gcd(self, other):
        a, b = _join(self, other)
        while b.c:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = _join(self, other)
        return a.c == b.c

    def __hash__(self):
        return hash((self.tower.key, self.c))

    def frob_coeffs(self, k):
        F = self.tower
        return Poly(F, [F.frob(u, k) for u in self.c])

    def to_str(self, var="th"):
        F = self.tower
        parts = []
        for d in reversed(range(len(self.c))):
            a = self.c[d]
            if not a:
                continue
            cs = F.to_str(a)
            if F.coords(a)[1:] != (0,) * (F.k - 1):
                cs = f"({cs})"
            if d == 0:
                parts.append(cs)
                continue
            mon = var if d == 1 else f"{var}^{d}"
            parts.append(mon if a == 1 else f"{cs}*{mon}")
        return "+".join(parts) if parts else "0"

    def __repr__(self):
        return f"Poly({self.to_str()})"


class RatFunc:
    """Element of K: num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _normalized=False):
        if den is None:
            den = Poly(num.tower, [1])
        num, den = _join(num, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly(num.tower, [1])
            else:
                g = num.gcd(den)
                if g.deg > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
                lc = den.lead()
                if lc != 1:
                    inv = num.tower.inv(lc)
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def tower(self):
        return self.num.tower

    @classmethod
    def from_int(cls, tower, n):
        return cls(Poly.const(tower, tower.from_int(n)))

    @classmethod
    def const(cls, tower, a):
        return cls(Poly.const(tower, a))

    @classmethod
    def theta(cls, tower):
        return cls(Poly.theta(tower))

    @classmethod
    def coerce(cls, x, tower):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        if isinstance(x, FFElem):
            return cls.const(x.tower, x.code)
        if isinstance(x, int):
            return cls.from_int(tower, x)
        raise TypeError(f"cannot interpret {x!r} as an element of K")

    def lift(self, tower):
        if tower is self.tower:
            return self
        return RatFunc(self.num.lift(tower), self.den.lift(tower), _normalized=True)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.deg == 0

    def _other(self, other):
        if isinstance(other, RatFunc):
            return other
        return RatFunc.coerce(other, self.tower)

    def __add__(self, other):
        other = self._other(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc.from_int(self.tower, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.from_int(self.tower, other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_str(self):
        if self.den.deg == 0:
            return self.num.to_str()
        n, d = self.num.to_str(), self.den.to_str()
        if len(self.num.c) - sum(1 for x in self.num.c if not x) > 1:
            n = f"({n})"
        if len(self.den.c) - sum(1 for x in self.den.c if not x) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()})"


def norm_inf(x: RatFunc):
    """Exponent e with |x|_inf = q^e; -inf for zero."""
    if x.is_zero():
        return NEG_INF
    return x.num.deg - x.den.deg


class TPoly:
    """Polynomial in t with coefficients in K, lowest degree first."""

    __slots__ = ("tower", "c")

    def __init__(self, tower: FieldTower, coeffs=()):
        c = [RatFunc.coerce(x, tower) for x in coeffs]
        for x in c:
            if x.tower is not tower:
                tower = tower.join(x.tower)
        c = [x.lift(tower) for x in c]
        while c and c[-1].is_zero():
            c.pop()
        self.tower = tower
        self.c = tuple(c)

    @classmethod
    def const(cls, x: RatFunc):
        return cls(x.tower, [x])

    @classmethod
    def t(cls, tower):
        return cls(tower, [RatFunc.from_int(tower, 0), RatFunc.from_int(tower, 1)])

    @classmethod
    def t_minus_theta_pow(cls, tower, n):
        base = cls(tower, [-RatFunc.theta(tower), RatFunc.from_int(tower, 1)])
        out = cls(tower, [RatFunc.from_int(tower, 1)])
        for _ in range(n):
            out = out * base
        return out

    @property
    def deg(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lift(self, tower):
        return TPoly(tower, [x.lift(tower) for x in self.c])

    def coeff(self, j):
        return self.c[j] if 0 <= j < len(self.c) else RatFunc.from_int(self.tower, 0)

    def _other(self, other):
        if isinstance(other, TPoly):
            return other
        return TPoly(self.tower, [RatFunc.coerce(other, self.tower)])

    def __add__(self, other):
        other = self._other(other)
        n = max(len(self.c), len(other.c))
        return TPoly(self.tower.join(other.tower), [self.coeff(j) + other.coeff(j) for j in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return TPoly(self.tower, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        other = self._other(other)
        tower = self.tower.join(other.tower)
        if not self.c or not other.c:
            return TPoly(tower)
        zero = RatFunc.from_int(tower, 0)
        out = [zero] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(other.c):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TPoly(tower, out)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by t^k."""
        zero = RatFunc.from_int(self.tower, 0)
        return TPoly(self.tower, [zero] * k + list(self.c))

    def eval(self, x):
        x = RatFunc.coerce(x, self.tower)
        acc = RatFunc.from_int(self.tower, 0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def eval_theta(self):
        return self.eval(RatFunc.theta(self.tower))

    def divmod_t_minus_theta(self):
        """Synthetic division by (t - theta): returns (quotient, remainder in K)."""
        th = RatFunc.theta(self.tower)
        if not self.c:
            return TPoly(self.tower), RatFunc.from_int(self.tower, 0)
        acc = []
        cur = RatFunc.from_int(self.tower, 0)
        for a in reversed(self.c):
            cur = cur * th + a
            acc.append(cur)
        rem = acc.pop()
        return TPoly(self.tower, list(reversed(acc))), rem

    def expansion_at_theta(self, n=None):
        """Coefficients x_j of f = sum x_j (t - theta)^j, j = 0..deg (or n)."""
        out = []
        cur = self
        size = (self.deg + 1) if n is None else n + 1
        for _ in range(max(size, 0)):
            cur, r = cur.divmod_t_minus_theta()
            out.append(r)
        return out

    @classmethod
    def from_expansion_at_theta(cls, tower, xs):
        base = cls(tower, [-RatFunc.theta(tower), RatFunc.from_int(tower, 1)])
        acc = cls(tower)
        for x in reversed(list(xs)):
            acc = acc * base + TPoly(tower, [x])
        return acc

    def twist_coeffs(self, k):
        """Frobenius twist on K-coefficients: f^(k) for k >= 0."""
        if k < 0:
            raise ValueError("negative twists leave K; use the series layer")
        q = self.tower.q
        out = []
        for a in self.c:
            num = _poly_twist(a.num, k, q)
            den = _poly_twist(a.den, k, q)
            out.append(RatFunc(num, den))
        return TPoly(self.tower, out)

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            return NotImplemented
        if len(self.c) != len(other.c):
            return False
        return all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(self.c)

    def to_str(self):
        parts = []
        for j in reversed(range(len(self.c))):
            a = self.c[j]
            if a.is_zero():
                continue
            s = a.to_str()
            if j == 0:
                parts.append(s if len(self.c) == 1 or not ("+" in s) else f"({s})")
                continue
            mon = "t" if j == 1 else f"t^{j}"
            if s == "1":
                parts.append(mon)
            elif "+" in s or "/" in s:
                parts.append(f"({s})*{mon}")
            else:
                parts.append(f"{s}*{mon}")
        return "+".join(parts) if parts else "0"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"TPoly({self.to_str()})"


def _poly_twist(p: Poly, k: int, q: int) -> Poly:
    F = p.tower
    step = q ** k
    out = [0] * (step * p.deg + 1) if p.c else []
    for d, a in enumerate(p.c):
        if a:
            out[d * step] = F.frob(a, k)
    return Poly(F, out)


def hyperderiv(f: TPoly, j: int) -> TPoly:
    """j-th hyperderivative: d^j(t^m) = C(m, j) t^(m-j), binomial mod p."""
    p = f.tower.p
    out = []
    for mdeg in range(j, len(f.c)):
        b = binom_mod_p(mdeg, j, p)
        out.append(f.c[mdeg] * b if b else RatFunc.from_int(f.tower, 0))
    return TPoly(f.tower, out)


def dn_matrix(tower: FieldTower, n: int):
    """D_n with rows/columns ordered (d^n, ..., d^0), generated from
    (d^j f)(0) = sum_{i>=j} C(i,j) (-theta)^(i-j) (d^i f)(theta)."""
    p = tower.p
    minus_th = -RatFunc.theta(tower)
    mat = []
    for r in range(n + 1):
        j = n - r
        row = []
        for c in range(n + 1):
            i = n - c
            b = binom_mod_p(i, j, p) if i >= j else 0
            row.append(minus_th ** (i - j) * b if b else RatFunc.from_int(tower, 0))
        mat.append(row)
    return mat


def dn_norm_exponent(tower: FieldTower, n: int):
    return max(norm_inf(x) for row in dn_matrix(tower, n) for x in row)


def dn_expansion_change(f: TPoly, n: int):
    """Values (d^j f)(0) and (d^j f)(theta), j = n..0, plus the D_n check.

    Returns (values_at_0, values_at_theta, flag).
    """
    if f.deg > n:
        raise ValueError("deg f must not exceed n")
    tower = f.tower
    zero = RatFunc.from_int(tower, 0)
    th = RatFunc.theta(tower)
    at0 = [f.coeff(j) for j in range(n, -1, -1)]
    atth = [hyperderiv(f, j).eval(th) for j in range(n, -1, -1)]
    mat = dn_matrix(tower, n)
    flag = True
    for r in range(n + 1):
        acc = zero
        for c in range(n + 1):
            if not mat[r][c].is_zero():
                acc = acc + mat[r][c] * atth[c]
        if acc != at0[r]:
            flag = False
    return at0, atth, flag


def gauss_norm_exponent(f: TPoly):
    """Exponent of ||f|| = max_j |(d^j f)(0)|."""
    return max((norm_inf(a) for a in f.c), default=NEG_INF)


def theta_norm_exponent(f: TPoly):
    """Exponent of ||f||_theta = max_j |(d^j f)(theta)|."""
    return max((norm_inf(x) for x in f.expansion_at_theta()), default=NEG_INF)
