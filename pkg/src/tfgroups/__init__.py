"""Exact computations with prime-localized subgroups of Q^d and the class K-hat."""

from .groups import (
    Generator,
    GroupError,
    LocalizedGroup,
    contains_group,
    equals_group,
    from_json,
    group,
    is_inf_divisible,
    is_pure,
    member,
    p_omega,
    pure_closure,
    to_json,
)
from .kclass import (
    ClassLabel,
    Kind,
    PrimeTuple,
    amalgamation_certificate,
    build_G_base,
    build_G_U,
    classify,
    closure_op,
    find_witness,
    gtype,
    gtype_equal,
    instability_report,
    jep_witness,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "Generator",
    "GroupError",
    "LocalizedGroup",
    "contains_group",
    "equals_group",
    "from_json",
    "group",
    "is_inf_divisible",
    "is_pure",
    "member",
    "p_omega",
    "pure_closure",
    "to_json",
    "ClassLabel",
    "Kind",
    "PrimeTuple",
    "amalgamation_certificate",
    "build_G_base",
    "build_G_U",
    "classify",
    "closure_op",
    "find_witness",
    "gtype",
    "gtype_equal",
    "instability_report",
    "jep_witness",
    "verify_certificate",
]
