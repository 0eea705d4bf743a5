"""Finite fields F_{q^m} with q = p^ell, stored as F_p[g]/(h) with log tables.

Elements are plain ints inside a tower: the base-p encoding of the coordinate
vector (c_0, ..., c_{k-1}) with respect to 1, g, ..., g^{k-1}, where k = ell*m.
The ``FFElem`` wrapper adds operator overloading for library users.
"""
from __future__ import annotations

from math import gcd

from .errors import ConfigError, ResourceBoundError

MAX_EXT_DEGREE = 12
MAX_FIELD_SIZE = 1 << 21


# --- polynomials over F_p as lists, lowest degree first -----------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def fp_divmod(a, b, p):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    quo = [0] * max(len(a) - db, 0)
    _trim(a)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        quo[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return _trim(quo), a


def fp_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(u - v) % p for u, v in zip(a, b)])


def fp_mod(a, b, p):
    return fp_divmod(a, b, p)[1]


def fp_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def fp_powmod(base, e, mod, p):
    result = [1]
    base = fp_mod(base, mod, p)
    while e:
        if e & 1:
            result = fp_mod(fp_mul(result, base, p), mod, p)
        base = fp_mod(fp_mul(base, base, p), mod, p)
        e >>= 1
    return result


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n):
    return n >= 2 and prime_factors(n) == [n]


def is_irreducible(f, p):
    """Rabin's test for a monic polynomial f over F_p (list, lowest first)."""
    f = _trim(list(f))
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]

    def frob_power(j):
        cur = x
        for _ in range(j):
            cur = fp_powmod(cur, p, f, p)
        return cur

    if fp_sub(frob_power(k), x, p):
        return False
    for r in prime_factors(k):
        h = frob_power(k // r)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(fp_gcd(f, _trim(h), p)) > 1:
            return False
    return True


def _x_is_primitive(f, p):
    k = len(f) - 1
    order = p ** k - 1
    for r in prime_factors(order):
        if fp_powmod([0, 1], order // r, f, p) == [1]:
            return False
    return True


def find_modulus(p, k, primitive=True):
    """Least monic irreducible (optionally primitive) polynomial of degree k.

    Candidates are enumerated by the integer encoding of their lower
    coefficients, so the choice is deterministic.
    """
    if p ** k > MAX_FIELD_SIZE:
        raise ResourceBoundError(f"field of size {p}^{k} exceeds the desk-scale bound")
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        f = low + [1]
        if low[0] == 0 and k > 1:
            continue
        if not is_irreducible(f, p):
            continue
        if primitive and k > 1 and not _x_is_primitive(f, p):
            continue
        return tuple(f)
    raise ConfigError(f"no irreducible polynomial of degree {k} over F_{p} found")


def _fp_solve(rows, rhs, p):
    """Solve rows * x = rhs over F_p; return one solution or None."""
    n = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(v - f * w) % p for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][-1]:
            return None
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1]
    return x


def _fp_inverse(mat, p):
    n = len(mat)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        sol = _fp_solve(mat, e, p)
        if sol is None:
            raise ConfigError("singular basis matrix")
        cols.append(sol)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# --- the tower ------------------------------------------------------------------

class FieldTower:
    """The field F_{q^m}, q = p^ell, realised as F_p[g]/(modulus).

    Use :meth:`make` to obtain cached instances; equal parameters give the
    identical object, so towers may be compared with ``is``.
    """

    _cache: dict = {}

    @classmethod
    def make(cls, p, ell=1, fq_modulus=None, m=1):
        if not is_prime(p):
            raise ConfigError(f"p={p} is not prime")
        if ell < 1 or m < 1:
            raise ConfigError("ell and m must be positive")
        if m > MAX_EXT_DEGREE:
            raise ResourceBoundError(f"extension degree {m} exceeds bound {MAX_EXT_DEGREE}")
        if fq_modulus is None:
            fq_modulus = (0, 1) if ell == 1 else find_modulus(p, ell, primitive=False)
        fq_modulus = tuple(int(c) % p for c in fq_modulus)
        key = (p, ell, fq_modulus, m)
        tower = cls._cache.get(key)
        if tower is None:
            tower = cls(p, ell, fq_modulus, m)
            cls._cache[key] = tower
        return tower

    @classmethod
    def for_q(cls, q, fq_modulus=None, m=1):
        facs = prime_factors(q) if q > 1 else []
        if len(facs) != 1:
            raise ConfigError(f"q={q} is not a prime power")
        p = facs[0]
        ell = 0
        n = q
        while n > 1:
            n //= p
            ell += 1
        return cls.make(p, ell, fq_modulus, m)

    def __init__(self, p, ell, fq_modulus, m):
        self.p = p
        self.ell = ell
        self.q = p ** ell
        self.m = m
        self.k = ell * m
        self.Q = p ** self.k
        if self.Q > MAX_FIELD_SIZE:
            raise ResourceBoundError(f"field of size {self.Q} exceeds the desk-scale bound")
        if len(fq_modulus) != ell + 1 or fq_modulus[-1] != 1:
            raise ConfigError("fq_modulus must be monic of degree ell")
        if not is_irreducible(list(fq_modulus), p):
            raise ConfigError("fq_modulus is not irreducible over F_p")
        self.fq_modulus = fq_modulus
        self.modulus = fq_modulus if m == 1 else find_modulus(p, self.k, primitive=True)
        self.key = (p, ell, fq_modulus, m)
        self._build_tables()
        self._build_fq_basis()
        self._as_matrix = None
        self._embeddings: dict = {}

    # construction helpers
    def _coords_mul(self, a, b):
        prod = fp_mul(a, b, self.p)
        r = fp_mod(prod, list(self.modulus), self.p)
        return r + [0] * (self.k - len(r))

    def _build_tables(self):
        p, k, Q = self.p, self.k, self.Q
        order = Q - 1
        self.order = order
        if k == 1:
            # F_p: find a primitive root
            prim = next(g for g in range(1, p) if p == 2 or all(pow(g, order // r, p) != 1 for r in prime_factors(order)))
            exp = [1] * order
            for i in range(1, order):
                exp[i] = exp[i - 1] * prim % p
        else:
            mod = list(self.modulus)
            if _x_is_primitive(mod, p):
                prim_coords = [0, 1] + [0] * (k - 2)
            else:
                prim_coords = None
                for code in range(2, Q):
                    c = self.coords_of_code(code)
                    ok = True
                    for r in prime_factors(order):
                        if fp_powmod(_trim(list(c)), order // r, mod, p) == [1]:
                            ok = False
                            break
                    if ok:
                        prim_coords = c
                        break
            exp = [0] * order
            cur = [1] + [0] * (k - 1)
            shift = prim_coords == [0, 1] + [0] * (k - 2)
            low = mod[:-1]
            for i in range(order):
                exp[i] = self.code_of_coords(cur)
                if shift:
                    top = cur[-1]
                    cur = [0] + cur[:-1]
                    if top:
                        cur = [(c - top * l) % p for c, l in zip(cur, low)]
                else:
                    cur = self._coords_mul(cur, prim_coords)
        log = [-1] * Q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        if k > 1 and p != 2:
            zech = [-1] * order
            for n, v in enumerate(exp):
                c0 = v % p
                w = v - c0 + (c0 + 1) % p
                zech[n] = log[w] if w else -1
            self._zech = zech
        else:
            self._zech = None
        self._qpow_cache = {}

    def _build_fq_basis(self):
        p, ell, m, k = self.p, self.ell, self.m, self.k
        # rho: image in this field of the root of fq_modulus defining F_q
        if ell == 1:
            self.rho = 0
        elif m == 1:
            self.rho = p  # the generator g itself
        else:
            step = (self.Q - 1) // (self.q - 1)
            cands = [self._exp[j * step] for j in range(self.q - 1)]
            roots = [z for z in cands if self.eval_fp_poly(self.fq_modulus, z) == 0]
            self.rho = min(roots, key=self.coords)
        g = p if k > 1 else 1
        cols = []
        for i in range(m):
            gi = self.pow(g, i)
            for j in range(ell):
                v = self.mul(self.pow(self.rho, j) if j else 1, gi)
                cols.append(self.coords(v))
        mat = [[cols[c][r] for c in range(k)] for r in range(k)]
        self._fq_basis_inv = _fp_inverse(mat, p)

    # encoding
    def coords_of_code(self, code):
        p = self.p
        return [(code // p ** i) % p for i in range(self.k)]

    def code_of_coords(self, coords):
        p = self.p
        out = 0
        for i in reversed(range(self.k)):
            out = out * p + (coords[i] % p if i < len(coords) else 0)
        return out

    def coords(self, a):
        return tuple(self.coords_of_code(a))

    # arithmetic on codes
    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % self.order]
        if z < 0:
            return 0
        return self._exp[(la + z) % self.order]

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2 or a == 0:
            return a
        # -1 = pi^(order/2) for odd p
        return self._exp[(self._log[a] + self.order // 2) % self.order]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        return self._exp[(self._log[a] + self._log[b]) % self.order]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % self.order]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.k == 1:
            return pow(a, n % (self.p - 1), self.p) if self.p > 2 else 1
        return self._exp[(self._log[a] * n) % self.order]

    def frob(self, a, k=1):
        """a^(q^k); negative k gives iterated q-th roots."""
        if a == 0 or k == 0 or self.Q == self.q:
            return a
        e = self._qpow_cache.get(k)
        if e is None:
            e = pow(self.q, k, self.order) if k > 0 else pow(pow(self.q, -k, self.order), -1, self.order)
            self._qpow_cache[k] = e
        return self._exp[(self._log[a] * e) % self.order]

    def from_int(self, n):
        return n % self.p

    def is_fq(self, a):
        return self.frob(a, 1) == a

    def eval_fp_poly(self, poly, z):
        acc = 0
        for c in reversed(poly):
            acc = self.add(self.mul(acc, z), self.from_int(c))
        return acc

    def sum(self, items):
        acc = 0
        for x in items:
            acc = self.add(acc, x)
        return acc

    # F_q structure
    def fq_coords(self, a):
        """Coordinates of a in the F_q-basis 1, g, ..., g^(m-1), as base-field codes."""
        c = self.coords_of_code(a)
        p = self.p
        sol = [sum(row[j] * c[j] for j in range(self.k)) % p for row in self._fq_basis_inv]
        out = []
        for i in range(self.m):
            chunk = sol[i * self.ell:(i + 1) * self.ell]
            out.append(sum(v * p ** j for j, v in enumerate(chunk)))
        return out

    def embed_fq(self, b):
        """Image of a base-field (F_q) code b in this field."""
        if self.ell == 1:
            return b % self.p
        acc = 0
        for j in range(self.ell):
            cj = (b // self.p ** j) % self.p
            if cj:
                acc = self.add(acc, self.mul(self.from_int(cj), self.pow(self.rho, j) if j else 1))
        return acc

    def fq_component(self, a):
        """The F_q-component of a (coefficient of 1 in the F_q-basis), as an element here."""
        return self.embed_fq(self.fq_coords(a)[0])

    @property
    def base(self):
        return FieldTower.make(self.p, self.ell, self.fq_modulus, 1)

    def fq_elements(self):
        return [self.embed_fq(b) for b in range(self.q)]

    # Artin-Schreier over the finite field
    def _as_matrix_rows(self):
        if self._as_matrix is None:
            cols = []
            for i in range(self.k):
                gi = self.code_of_coords([1 if d == i else 0 for d in range(self.k)])
                cols.append(self.coords(self.sub(self.frob(gi, 1), gi)))
            self._as_matrix = [[cols[c][r] for c in range(self.k)] for r in range(self.k)]
        return self._as_matrix

    def as_root_here(self, c):
        """Canonical root of y^q - y = c in this field, or None."""
        if c == 0:
            return 0
        sol = _fp_solve(self._as_matrix_rows(), list(self.coords(c)), self.p)
        if sol is None:
            return None
        y0 = self.code_of_coords(sol)
        roots = [self.add(y0, z) for z in self.fq_elements()]
        return min(roots, key=self.coords)

    def as_solve(self, c, max_m=MAX_EXT_DEGREE):
        """Solve y^q - y = c, enlarging the tower by degree p when needed.

        Returns (root code, tower holding the root).
        """
        y = self.as_root_here(c)
        if y is not None:
            return y, self
        if self.m * self.p > max_m:
            raise ResourceBoundError(
                f"Artin-Schreier root needs extension degree {self.m * self.p} > {max_m}")
        big = FieldTower.make(self.p, self.ell, self.fq_modulus, self.m * self.p)
        cb = self.lift(c, big)
        yb = big.as_root_here(cb)
        if yb is None:
            raise ConfigError("Artin-Schreier root not found after enlargement")
        return yb, big

    # embeddings
    def compatible(self, other):
        return (self.p, self.ell, self.fq_modulus) == (other.p, other.ell, other.fq_modulus)

    def _embedding_root(self, other):
        if other.m % self.m:
            raise ConfigError("target field does not contain this field")
        step = (other.Q - 1) // (self.Q - 1)
        cands = [0] + [other._exp[j * step] for j in range(self.Q - 1)]
        rho_poly = self.coords(self.rho)
        good = []
        for z in cands:
            if other.eval_fp_poly(self.modulus, z) != 0:
                continue
            if self.ell > 1 and other.eval_fp_poly(rho_poly, z) != other.rho:
                continue
            good.append(z)
        if not good:
            raise ConfigError("no compatible embedding root found")
        return min(good, key=other.coords)

    def lift(self, a, other):
        """Map a code of this field into ``other`` along the canonical embedding."""
        if other is self:
            return a
        if not self.compatible(other):
            raise ConfigError("incompatible field towers")
        emb = self._embeddings.get(other.key)
        if emb is None:
            root = self._embedding_root(other)
            powers = [1]
            for _ in range(1, self.k):
                powers.append(other.mul(powers[-1], root))
            emb = (powers, {})
            self._embeddings[other.key] = emb
        powers, memo = emb
        out = memo.get(a)
        if out is None:
            out = 0
            for c, pw in zip(self.coords_of_code(a), powers):
                if c:
                    out = other.add(out, other.mul(other.from_int(c), pw))
            memo[a] = out
        return out

    def join(self, other):
        """Smallest cached tower containing both fields."""
        if other is self:
            return self
        if not self.compatible(other):
            raise ConfigError("incompatible field towers")
        m = self.m * other.m // gcd(self.m, other.m)
        return FieldTower.make(self.p, self.ell, self.fq_modulus, m)

    # text
    def to_str(self, a):
        c = self.coords_of_code(a)
        parts = []
        for d in reversed(range(self.k)):
            v = c[d]
            if not v:
                continue
            if d == 0:
                parts.append(str(v))
            elif d == 1:
                parts.append("g" if v == 1 else f"{v}*g")
            else:
                parts.append(f"g^{d}" if v == 1 else f"{v}*g^{d}")
        return "+".join(parts) if parts else "0"

    def __repr__(self):
        return f"FieldTower(p={self.p}, ell={self.ell}, m={self.m})"


class FFElem:
    """An element of a tower, with operator overloading."""

    __slots__ = ("tower", "code")

    def __init__(self, tower: FieldTower, code: int):
        self.tower = tower
        self.code = code

    @classmethod
    def from_coords(cls, tower, coords):
        return cls(tower, tower.code_of_coords(list(coords)))

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.tower is self.tower:
                return self.tower, self.code, other.code
            if not self.tower.compatible(other.tower):
                raise ConfigError("mixed field contexts")
            big = self.tower.join(other.tower)
            return big, self.tower.lift(self.code, big), other.tower.lift(other.code, big)
        if isinstance(other, int):
            return self.tower, self.code, self.tower.from_int(other)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return FFElem(t, t.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return FFElem(t, t.sub(a, b))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FFElem(self.tower, self.tower.neg(self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return FFElem(t, t.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return FFElem(t, t.div(a, b))

    def __pow__(self, n):
        return FFElem(self.tower, self.tower.pow(self.code, n))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.code == self.tower.from_int(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        c = self._coerce(other)
        return c[1] == c[2]

    def __hash__(self):
        return hash((self.tower.key, self.code))

    def is_zero(self):
        return self.code == 0

    def coords(self):
        return self.tower.coords(self.code)

    def lift(self, tower):
        return FFElem(tower, self.tower.lift(self.code, tower))

    def __str__(self):
        return self.tower.to_str(self.code)

    def __repr__(self):
        return f"FFElem({self})"


def frobenius_pow(x: FFElem, k: int) -> FFElem:
    """x^(q^k); negative k takes the unique iterated q-th root."""
    return FFElem(x.tower, x.tower.frob(x.code, k))


def as_solve_const(c: FFElem, max_m: int = MAX_EXT_DEGREE):
    """Canonical root y of y^q - y = c and the (possibly enlarged) extension degree.

    The root is the lexicographically least coordinate vector among the q roots.
    """
    y, tower = c.tower.as_solve(c.code, max_m)
    return FFElem(tower, y), tower.m
