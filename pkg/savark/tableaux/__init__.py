from savark.tableaux.analysis import (
    DIRK,
    ERK,
    GENERAL,
    algebraic_stability,
    check_ark_order,
    classify,
    stability_function,
    stage_blocks,
    validate,
    validate_pair,
)
from savark.tableaux.kronecker import build_rkpc_markII
from savark.tableaux.library import available_methods, base_tableau, builtin
from savark.tableaux.spec import ARKPair, ButcherTableau, MARKIITableaux, OrderReport, StabilityReport
from savark.tableaux.text_format import load_pair, parse_pair

__all__ = [
    "ARKPair",
    "ButcherTableau",
    "DIRK",
    "ERK",
    "GENERAL",
    "MARKIITableaux",
    "OrderReport",
    "StabilityReport",
    "algebraic_stability",
    "available_methods",
    "base_tableau",
    "build_rkpc_markII",
    "builtin",
    "check_ark_order",
    "classify",
    "load_pair",
    "parse_pair",
    "stability_function",
    "stage_blocks",
    "validate",
    "validate_pair",
]
