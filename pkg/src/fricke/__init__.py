"""Exact-arithmetic toolkit for cusp sets of rational Fricke groups."""

__version__ = "0.1.0"

from .exactnum import (
    INFINITY,
    ProjPoint,
    Rational,
    ball_trace_contains,
    reduce_point,
    residue_mod_pk,
    vp,
)
from .groups import (
    ElementClass,
    FrickeGroup,
    ProjMatrix,
    apply,
    arithmeticity_screen,
    classify_element,
    fixed_points,
    lambda_generators,
    make_group,
    parabolic_at_infinity,
    support_primes,
    word_matrix,
)
from .obstruct import (
    Verdict,
    Witness,
    check_density_criterion,
    check_integer_t_conditions,
    check_square_obstruction,
    check_two_prime_obstruction,
    classify,
    mine_invariants,
    verify_invariance,
)
from .orbitsearch import (
    CuspRecord,
    CuspTestResult,
    adelic_probe,
    cusp_bfs,
    cusp_test,
    padic_probe,
    special_point_scan,
)
from .congruence import (
    MissReport,
    OrbitLabel,
    enumerate_labels,
    gamma0_label,
    gamma_label,
    miss_scan,
)
from .predicates import Predicate, eval_predicate, parse_predicate
from .words import Word, parity, parse_word

__all__ = [
    "INFINITY",
    "ProjPoint",
    "Rational",
    "ball_trace_contains",
    "reduce_point",
    "residue_mod_pk",
    "vp",
    "ElementClass",
    "FrickeGroup",
    "ProjMatrix",
    "apply",
    "arithmeticity_screen",
    "classify_element",
    "fixed_points",
    "lambda_generators",
    "make_group",
    "parabolic_at_infinity",
    "support_primes",
    "word_matrix",
    "Verdict",
    "Witness",
    "check_density_criterion",
    "check_integer_t_conditions",
    "check_square_obstruction",
    "check_two_prime_obstruction",
    "classify",
    "mine_invariants",
    "verify_invariance",
    "CuspRecord",
    "CuspTestResult",
    "adelic_probe",
    "cusp_bfs",
    "cusp_test",
    "padic_probe",
    "special_point_scan",
    "MissReport",
    "OrbitLabel",
    "enumerate_labels",
    "gamma0_label",
    "gamma_label",
    "miss_scan",
    "Predicate",
    "eval_predicate",
    "parse_predicate",
    "Word",
    "parity",
    "parse_word",
]
