"""Command line front end.  Every input produces one record; records are
JSON lines with ``--output records`` and ``key=value`` lines otherwise."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, ResourceBoundError, FqPolylogError
from .fields import FieldTower, prime_factors
from .poly import NEG_INF, norm_inf
from .series import reduce_mod_A
from .textio import parse_ratfunc, parse_series, parse_tpoly, format_series
from . import polylog, ext
from .wp import as_solve_series

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    p: int
    ell: int
    fq_modulus: tuple | None
    prec: int = 40
    t_prec: int = 16
    deg_bound: int = 8
    output: str = "text"

    @property
    def q(self):
        return self.p ** self.ell

    def tower(self) -> FieldTower:
        return FieldTower.make(self.p, self.ell, self.fq_modulus, 1)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _exp(x):
    if x is None:
        return None
    if x == NEG_INF:
        return "-inf"
    return str(Fraction(x))


def _config(args) -> RunConfig:
    facs = prime_factors(args.q) if args.q > 1 else []
    if len(facs) != 1:
        raise ConfigError(f"q={args.q} is not a prime power")
    p = facs[0]
    if args.p is not None and args.p != p:
        raise ConfigError(f"--p {args.p} does not match q={args.q}")
    ell, x = 0, args.q
    while x > 1:
        x //= p
        ell += 1
    mod = None
    if args.fq_modulus:
        try:
            mod = tuple(int(c) for c in args.fq_modulus.split(","))
        except ValueError:
            raise ConfigError("--fq-modulus takes comma-separated coefficients, lowest degree first")
    if args.prec < 8:
        raise ConfigError("--prec must be at least 8")
    cfg = RunConfig(p, ell, mod, args.prec, args.t_prec, args.deg_bound, args.output)
    cfg.tower()
    return cfg


def _inputs(args, attr):
    items = list(getattr(args, attr) or [])
    if getattr(args, "input", None):
        with open(args.input) as fh:
            items += [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not items:
        raise ConfigError(f"no inputs given (use --{attr.replace('_', '-')} or --input)")
    return items


def _series_record(x):
    return {"value": format_series(x), "floor": _exp(x.floor_exponent()), "m": x.F.m}


def _field_notice(m, q):
    return f"F_{q ** m}" if m > 1 else None


def _do_eval_kpl(cfg, args, u_text):
    F = cfg.tower()
    u = parse_ratfunc(u_text, F)
    rec = {"verb": "eval-kpl", "n": args.n, "u": u.to_str(), "route": args.route}
    if args.route == "series":
        val = polylog.kpl_eval(args.n, u, cfg.prec)
        rec.update(_series_record(reduce_mod_A(val) if args.mod_a else val))
    elif args.route == "ext":
        rec.update(_series_record(ext.continue_kpl(args.n, u, cfg.prec)))
    elif args.route == "wp":
        rec.update(_series_record(ext.continue_kpl_wp_route(args.n, u, None, cfg.prec)))
    else:
        a = ext.continue_kpl(args.n, u, cfg.prec)
        b = ext.continue_kpl_wp_route(args.n, u, None, cfg.prec)
        rec.update(_series_record(a))
        rec["agreement_residual"] = _exp(reduce_mod_A(a - b).bound())
    return rec


def _do_continue_kpl(cfg, args, u_text):
    F = cfg.tower()
    u = parse_ratfunc(u_text, F)
    rec = {"verb": "continue-kpl", "n": args.n, "u": u.to_str()}
    route = args.route if args.route != "series" else "ext"
    rec["route"] = route
    if route in ("ext", "both"):
        c = ext.kpl_pipeline(args.n, u, cfg.prec)
        rec.update(_series_record(c.value))
        rec["ell"] = c.ell
        rec["g"] = c.g.to_str() if c.g is not None else None
        rec["B"] = [format_series(x) for x in c.B.coeffs]
        m = max(c.B.F.m, c.value.F.m)
        rec["extension"] = _field_notice(m, cfg.q)
        if route == "both":
            b = ext.continue_kpl_wp_route(args.n, u, None, cfg.prec)
            rec["agreement_residual"] = _exp(reduce_mod_A(c.value - b).bound())
    else:
        val = ext.continue_kpl_wp_route(args.n, u, None, cfg.prec)
        rec.update(_series_record(val))
        rec["extension"] = _field_notice(val.F.m, cfg.q)
    return rec


def _split(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def _index(args):
    try:
        return polylog.IndexTuple(int(x) for x in _split(args.s))
    except ValueError:
        raise ConfigError("--s takes comma-separated nonnegative integers")


def _do_eval_kmpl(cfg, args, u_text):
    F = cfg.tower()
    s = _index(args)
    us = [parse_ratfunc(x, F) for x in _split(u_text)]
    rec = {"verb": "eval-kmpl", "s": list(s), "u": [u.to_str() for u in us], "route": "series"}
    rec.update(_series_record(polylog.kmpl_eval(s, us, cfg.prec)))
    return rec


def _do_continue_kmpl(cfg, args, u_text):
    F = cfg.tower()
    s = _index(args)
    us = [parse_ratfunc(x, F) for x in _split(u_text)]
    if len(us) != len(s):
        raise ConfigError("index and argument lengths differ")
    w, M = polylog.continue_kmpl(s, us[0], us[1:], cfg.t_prec, cfg.prec)
    rec = {"verb": "continue-kmpl", "s": list(s), "u": [u.to_str() for u in us], "route": "wp"}
    rec["vector"] = [format_series(x) for x in w]
    rec["floors"] = [_exp(x.floor_exponent()) for x in w]
    rec["monodromy"] = [[format_series(x) for x in row] for row in M.matrix]
    return rec


def _do_delta(cfg, args, u_text):
    F = cfg.tower()
    u = parse_ratfunc(u_text, F)
    route = "series" if args.route == "series" else ("wp" if args.route == "wp" else "ext")
    res = polylog.delta_check(args.n, u, cfg.prec, route=route)
    return {"verb": "delta-check", "n": args.n, "u": u.to_str(), "route": route,
            "residual_exponent": _exp(res), "floor": _exp(Fraction(-cfg.prec)), "passes": res <= -cfg.prec}


def _do_wp_solve(cfg, args, c_text):
    F = cfg.tower()
    c = parse_series(c_text, F)
    r = as_solve_series(c, cfg.prec)
    y = r.value
    check = y.frob_power(1) - y - c
    rec = {"verb": "wp-solve", "c": format_series(c)}
    rec.update(_series_record(y))
    rec["field_growth"] = {k: list(v) for k, v in sorted(r.field_growth.items())}
    rec["residual_exponent"] = _exp(check.bound())
    return rec


def _do_relations(cfg, args, ulist_text):
    F = cfg.tower()
    us = [parse_ratfunc(x, F) for x in _split(ulist_text)]
    certs = ext.relation_search(us, args.n, cfg.deg_bound)
    if not certs:
        return [{"kind": "independent", "n": args.n, "u_list": [u.to_str() for u in us],
                 "deg_bound": cfg.deg_bound, "q": cfg.q}]
    out = []
    for cert in certs:
        if args.lift:
            cert = ext.lift_relation(cert.coefficients, us, args.n, cfg.prec, cfg.deg_bound)
            res = ext.verify_relation(cert)
            cert.residual_exponent, cert.floor_exponent = res.residual, res.floor
        rec = cert.to_record()
        if args.lift:
            rec["passes"] = bool(cert.residual_exponent <= cert.floor_exponent)
        out.append(rec)
    return out


def _do_verify(cfg, args, line):
    rec = json.loads(line)
    cert = ext.RelationCertificate.from_record(rec)
    res = ext.verify_relation(cert)
    return {"kind": "verification", "u_list": rec["u_list"], "coefficients": rec["coefficients"],
            "residual_exponent": _exp(res.residual), "floor_exponent": _exp(res.floor),
            "passes": res.passes}


def _emit(rec, cfg, out):
    if cfg.output == "records":
        out.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        out.write(" ".join(f"{k}={_text(v)}" for k, v in rec.items()) + "\n")


def _text(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def build_parser():
    ap = _Parser(prog="fqpolylog", description="Kochubei polylogarithms over F_q(theta).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=3)
    common.add_argument("--p", type=int, default=None)
    common.add_argument("--fq-modulus", default=None, help="comma-separated coefficients, lowest first")
    common.add_argument("--prec", type=int, default=40)
    common.add_argument("--t-prec", type=int, default=16)
    common.add_argument("--deg-bound", type=int, default=8)
    common.add_argument("--route", choices=["series", "ext", "wp", "both"], default="series")
    common.add_argument("--output", choices=["text", "records"], default="text")
    common.add_argument("--input", default=None, help="file with one input per line")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("eval-kpl", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", action="append")
    p.add_argument("--mod-a", action="store_true", help="print the reduction modulo A")
    p = sub.add_parser("continue-kpl", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", action="append")
    p = sub.add_parser("eval-kmpl", parents=[common])
    p.add_argument("--s", required=True)
    p.add_argument("--u", action="append", help="comma-separated arguments")
    p = sub.add_parser("continue-kmpl", parents=[common])
    p.add_argument("--s", required=True)
    p.add_argument("--u", action="append", help="comma-separated arguments")
    p = sub.add_parser("delta-check", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", action="append")
    p = sub.add_parser("wp-solve", parents=[common])
    p.add_argument("--c", action="append", help="series in the text grammar")
    p = sub.add_parser("relations", parents=[common])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--u-list", action="append", help="comma-separated elements")
    p.add_argument("--lift", action="store_true")
    p.add_argument("--verify", default=None, help="file of certificate records to check")
    return ap


_HANDLERS = {
    "eval-kpl": (_do_eval_kpl, "u"),
    "continue-kpl": (_do_continue_kpl, "u"),
    "eval-kmpl": (_do_eval_kmpl, "u"),
    "continue-kmpl": (_do_continue_kmpl, "u"),
    "delta-check": (_do_delta, "u"),
    "wp-solve": (_do_wp_solve, "c"),
    "relations": (_do_relations, "u_list"),
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    try:
        cfg = _config(args)
        if args.verb == "relations" and args.verify:
            handler = _do_verify
            with open(args.verify) as fh:
                items = [ln for ln in fh if ln.strip()]
        else:
            handler, attr = _HANDLERS[args.verb]
            items = _inputs(args, attr)
    except ConfigError as ex:
        print(f"fqpolylog: configuration error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundError as ex:
        print(f"fqpolylog: resource bound exceeded: {ex}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as ex:
        print(f"fqpolylog: {ex}", file=sys.stderr)
        return EXIT_USAGE
    for item in items:
        try:
            recs = handler(cfg, args, item)
        except ResourceBoundError as ex:
            print(f"fqpolylog: resource bound exceeded: {ex}", file=sys.stderr)
            return EXIT_RESOURCE
        except ConfigError as ex:
            print(f"fqpolylog: configuration error: {ex}", file=sys.stderr)
            return EXIT_USAGE
        except FqPolylogError as ex:
            recs = {"verb": args.verb, "input": item.strip(), "status": "error",
                    "error": type(ex).__name__, "message": str(ex)}
        for rec in recs if isinstance(recs, list) else [recs]:
            rec.setdefault("status", "ok")
            _emit(rec, cfg, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
