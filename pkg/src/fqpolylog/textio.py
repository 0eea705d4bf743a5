"""Text grammar shared by the library, the serializers and the command line.

Expressions use ``th`` for theta, ``t`` for the Tate variable, ``g`` for the
generator of the constant field, integers, ``+ - * / ^`` and parentheses.
Series use the canonical form ``coef*th^(a/e)+... + O(th^(v/e))``, with
symbolic tails written ``T(coef*th^(r))*th^(s)``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ConfigError
from .fields import FieldTower
from .poly import Poly, RatFunc, TPoly, NEG_INF

_TOKEN = re.compile(r"\s*(?:(\d+)|(th|t|g|O|T)|(.))")


def tokenize(text):
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, ident, sym = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        elif sym is not None:
            if sym.isspace():
                continue
            if sym not in "+-*/^()":
                raise ConfigError(f"unexpected character {sym!r} in {text!r}")
            out.append(("sym", sym))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            raise ConfigError(f"parse error in {self.text!r} near token {self.i}")
        self.i += 1
        return tok

    def accept(self, kind, value):
        if self.peek() == (kind, value):
            self.i += 1
            return True
        return False

    def done(self):
        return self.i >= len(self.toks)


class _ExprParser(_Parser):
    """Recursive descent into TPoly values."""

    def __init__(self, text, tower):
        super().__init__(text)
        self.F = tower

    def parse(self):
        v = self.expr()
        if not self.done():
            raise ConfigError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        if self.accept("sym", "-"):
            v = -self.term()
        else:
            self.accept("sym", "+")
            v = self.term()
        while True:
            if self.accept("sym", "+"):
                v = v + self.term()
            elif self.accept("sym", "-"):
                v = v - self.term()
            else:
                return v

    def term(self):
        v = self.power()
        while True:
            if self.accept("sym", "*"):
                v = v * self.power()
            elif self.accept("sym", "/"):
                d = self.power()
                if d.deg > 0 or d.is_zero():
                    raise ConfigError(f"division by {d} is not supported in {self.text!r}")
                v = v * TPoly(d.tower, [d.c[0].inverse()])
            else:
                return v

    def _int_exponent(self):
        neg = False
        if self.accept("sym", "("):
            neg = self.accept("sym", "-")
            n = self.take("num")[1]
            self.take("sym", ")")
        else:
            neg = self.accept("sym", "-")
            n = self.take("num")[1]
        return -n if neg else n

    def power(self):
        base = self.atom()
        if self.accept("sym", "^"):
            n = self._int_exponent()
            if n < 0:
                if base.deg > 0 or base.is_zero():
                    raise ConfigError("negative powers need a nonzero t-free base")
                return TPoly(base.tower, [base.c[0] ** n])
            out = TPoly(base.tower, [RatFunc.from_int(base.tower, 1)])
            for _ in range(n):
                out = out * base
            return out
        return base

    def atom(self):
        F = self.F
        kind, val = self.peek()
        if kind == "num":
            self.i += 1
            return TPoly(F, [RatFunc.from_int(F, val)])
        if kind == "id":
            self.i += 1
            if val == "th":
                return TPoly(F, [RatFunc.theta(F)])
            if val == "t":
                return TPoly.t(F)
            if val == "g":
                if F.k < 2:
                    raise ConfigError("'g' needs a proper extension of F_p")
                return TPoly(F, [RatFunc.const(F, F.p)])
            raise ConfigError(f"unexpected {val!r} in {self.text!r}")
        if self.accept("sym", "("):
            v = self.expr()
            self.take("sym", ")")
            return v
        raise ConfigError(f"parse error in {self.text!r}")


def parse_tpoly(text: str, tower: FieldTower) -> TPoly:
    return _ExprParser(text, tower).parse()


def parse_ratfunc(text: str, tower: FieldTower) -> RatFunc:
    f = parse_tpoly(text, tower)
    if f.deg > 0:
        raise ConfigError(f"{text!r} depends on t")
    return f.coeff(0)


def parse_field_elem(text: str, tower: FieldTower) -> int:
    x = parse_ratfunc(text, tower)
    if x.num.deg > 0 or x.den.deg > 0:
        raise ConfigError(f"{text!r} is not a constant")
    return x.num.c[0] if x.num.c else 0


# --- series -----------------------------------------------------------------------

def _frac_str(x: Fraction, e=None):
    if e is not None:
        return f"({x}/{e})"
    return f"({x.numerator}/{x.denominator})"


def format_coef(F, c):
    s = F.to_str(c)
    return f"({s})" if "+" in s else s


def format_series(x) -> str:
    F = x.F
    parts = [f"{format_coef(F, x.terms[a])}*th^({a}/{x.e})" for a in sorted(x.terms, reverse=True)]
    for (s, r) in sorted(x.tails, reverse=True):
        parts.append(f"T({format_coef(F, x.tails[(s, r)])}*th^{_frac_str(r)})*th^{_frac_str(s)}")
    body = "+".join(parts) if parts else "0"
    if x.floor != NEG_INF:
        body += f" + O(th^({x.floor}/{x.e}))"
    return body


class _SeriesParser(_Parser):
    def __init__(self, text, tower):
        super().__init__(text)
        self.F = tower

    def fraction(self):
        self.take("sym", "(")
        neg = self.accept("sym", "-")
        a = self.take("num")[1]
        b = 1
        if self.accept("sym", "/"):
            b = self.take("num")[1]
        self.take("sym", ")")
        return Fraction(-a if neg else a, b)

    def theta_power(self):
        self.take("id", "th")
        if self.accept("sym", "^"):
            if self.peek() == ("sym", "("):
                return self.fraction()
            neg = self.accept("sym", "-")
            n = self.take("num")[1]
            return Fraction(-n if neg else n)
        return Fraction(1)

    def coef_factor(self):
        """A constant factor: integer, g-power or a parenthesised constant expression."""
        F = self.F
        kind, val = self.peek()
        if kind == "num":
            self.i += 1
            return F.from_int(val)
        if (kind, val) == ("id", "g"):
            self.i += 1
            gen = F.p if F.k > 1 else None
            if gen is None:
                raise ConfigError("'g' needs a proper extension of F_p")
            if self.accept("sym", "^"):
                return F.pow(gen, self.take("num")[1])
            return gen
        if (kind, val) == ("sym", "("):
            depth = 0
            start = self.i
            while True:
                k, v = self.take()
                if (k, v) == ("sym", "("):
                    depth += 1
                elif (k, v) == ("sym", ")"):
                    depth -= 1
                    if depth == 0:
                        break
            inner = self.toks[start + 1:self.i - 1]
            return parse_field_elem(_untokenize(inner), F)
        raise ConfigError(f"bad coefficient in {self.text!r}")

    def monomial(self):
        """coef*th^(x) pieces; returns (code, exponent)."""
        F = self.F
        coef, ex = 1, Fraction(0)
        while True:
            if self.peek() == ("id", "th"):
                ex += self.theta_power()
            else:
                coef = F.mul(coef, self.coef_factor())
            if not self.accept("sym", "*"):
                return coef, ex

    def parse(self):
        from .series import CInftyElem, _explicit, make_tail
        F = self.F
        pairs = []
        tails = {}
        floor_ex = None
        first = True
        while first or self.accept("sym", "+"):
            first = False
            if self.accept("id", "O"):
                self.take("sym", "(")
                floor_ex = self.theta_power()
                self.take("sym", ")")
                continue
            if self.accept("id", "T"):
                self.take("sym", "(")
                a, r = self.monomial()
                self.take("sym", ")")
                s = Fraction(0)
                if self.accept("sym", "*"):
                    s = self.theta_power()
                tails[(s, r)] = a
                continue
            c, ex = self.monomial()
            if c:
                pairs.append((ex, c))
        if not self.done():
            raise ConfigError(f"trailing input in series {self.text!r}")
        x = _explicit(F, pairs)
        for (s, r), a in tails.items():
            tl, extra = make_tail(F, s, r, a)
            x = x + extra + CInftyElem(F, 1, {}, NEG_INF, tl)
        if floor_ex is not None:
            x = x.truncate(floor_ex)
        return x


def _untokenize(toks):
    return " ".join(str(v) for _, v in toks)


def parse_series(text: str, tower: FieldTower):
    return _SeriesParser(text, tower).parse()
