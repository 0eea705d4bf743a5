"""Artin-Schreier equations over series, and the map F -> F^(-1) - F on Tate elements."""
from __future__ import annotations

from fractions import Fraction
from math import floor as _ifloor
from typing import NamedTuple

from .errors import PrecisionError, UnsupportedTailError, ResourceBoundError
from .fields import MAX_EXT_DEGREE
from .poly import NEG_INF, TPoly
from .series import CInftyElem, tail_elem
from .tate import TateElem, POS_INF, twist, DEFAULT_PREC

MAX_RAMIFICATION_POWER = 4


class ASRoot(NamedTuple):
    value: CInftyElem
    field_growth: dict


def _negative_part_root(F, terms, e, floor, prec, target):
    """-sum_{i>=0} c^(q^i) for c with only negative exponents."""
    q = F.q
    if not terms and floor == NEG_INF:
        return CInftyElem(F, e)
    if target is not None:
        floor = max(floor, _ifloor(target * e))
    elif floor == NEG_INF:
        if terms:
            floor = max(terms) - prec * e
    if not terms:
        return CInftyElem(F, e, {}, floor)
    out = {}
    for a, c in terms.items():
        while a > floor:
            v = F.sub(out.get(a, 0), c)
            if v:
                out[a] = v
            else:
                out.pop(a, None)
            a *= q
            c = F.frob(c, 1)
    return CInftyElem(F, e, out, floor)


def as_solve_series(c: CInftyElem, prec: int = DEFAULT_PREC, max_m: int = MAX_EXT_DEGREE,
                    max_e: int | None = None, target=None) -> ASRoot:
    """Canonical y with y^q - y = c.

    Negative exponents use the convergent series, the constant term uses the
    finite-field solver (root with vanishing F_q-component), and positive
    exponents become symbolic tails T(a theta^k).  Exact inputs are resolved
    to ``prec`` digits below their leading negative term, or down to the
    absolute exponent ``target`` when given.
    """
    if c.tails:
        raise UnsupportedTailError("Artin-Schreier equation with a symbolic-tail right-hand side")
    F = c.F
    q = F.q
    if c.floor != NEG_INF and c.floor >= 0:
        raise PrecisionError("right-hand side is not known down to a negative exponent")
    e = c.e
    neg = {a: v for a, v in c.terms.items() if a < 0}
    pos = {a: v for a, v in c.terms.items() if a > 0}
    c0 = c.terms.get(0, 0)

    y = _negative_part_root(F, neg, e, c.floor, prec, target)
    G = F
    if c0:
        y0, G = F.as_solve(c0, max_m)
        y0 = G.sub(y0, G.fq_component(y0))
        y = y.lift(G) + CInftyElem.const(G, y0)
    for a, v in pos.items():
        y = y + tail_elem(G, 0, Fraction(a, e), F.lift(v, G))
    bound = max_e if max_e is not None else max(q ** MAX_RAMIFICATION_POWER, e)
    if y.e > bound:
        raise ResourceBoundError(f"ramification index {y.e} exceeds bound {bound}")
    growth = {}
    if G is not F:
        growth["m"] = (F.m, G.m)
    if y.e != e:
        growth["e"] = (e, y.e)
    return ASRoot(y, growth)


def wp(F_: TateElem) -> TateElem:
    """The map F -> F^(-1) - F."""
    return twist(F_, -1) - F_


def wp_inverse(g: TateElem, prec: int = DEFAULT_PREC, branch: TPoly | None = None,
               max_m: int = MAX_EXT_DEGREE) -> TateElem:
    """F with F^(-1) - F = g, coefficient by coefficient.

    Writing F_j = z^q turns F_j^(1/q) - F_j = g_j into z^q - z = -g_j.
    Exact coefficients are resolved down to theta^(-prec-j).
    ``branch`` adds an element of F_q[t] to move off the canonical solution.
    """
    coeffs = []
    for j, gj in enumerate(g.coeffs):
        z = as_solve_series(-gj, prec, max_m, target=Fraction(-prec - j, g.F.q)).value
        coeffs.append(z.frob_power(1))
    b = g.tail
    if b == NEG_INF:
        tail = NEG_INF
    elif b != POS_INF and b < g.N + 1:
        q = g.F.q
        tail = q * b - (q - 1) * (g.N + 1)
    else:
        tail = POS_INF
    out = TateElem(g.F, coeffs, tail)
    if branch is not None:
        if any(not (a.is_poly() and a.num.deg <= 0 and all(branch.tower.is_fq(x) for x in a.num.c))
               for a in branch.c):
            raise ValueError("branch shift must lie in F_q[t]")
        out = out + TateElem.from_tpoly(branch)
    return out
