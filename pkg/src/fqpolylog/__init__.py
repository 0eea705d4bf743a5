"""Kochubei polylogarithms over F_q(theta): evaluation, analytic continuation
through extension classes of Carlitz tensor powers, and relation search."""
from .errors import (FqPolylogError, ConfigError, ResourceBoundError, DomainError,
                     PrecisionError, ClassMismatchError, UnsupportedTailError)
from .fields import FieldTower, FFElem, frobenius_pow, as_solve_const
from .poly import Poly, RatFunc, TPoly, hyperderiv, dn_matrix, dn_expansion_change
from .series import CInftyElem, embed_ratfunc, series_inv, qth_root_series, reduce_mod_A
from .tate import TateElem, twist, gauss_norms, geom_expand, eval_at_theta, omega_trunc, check_diff_eq
from .wp import ASRoot, as_solve_series, wp_inverse, wp
from .polylog import (IndexTuple, MonodromyBasis, kpl_eval, kmpl_domain_check, kmpl_eval, tdeform,
                      kmpl_system_solve, monodromy_basis, reduce_mod_monodromy, continue_kmpl, delta_check)
from .ext import (ExtPoint, RelationCertificate, vpoint_from_poly, t_action, t_inverse_action,
                  small_generate, class_correction, continue_kpl, continue_kpl_wp_route,
                  relation_search, lift_relation, verify_relation)
from .textio import parse_series, parse_ratfunc, parse_tpoly, format_series

__version__ = "0.1.0"
