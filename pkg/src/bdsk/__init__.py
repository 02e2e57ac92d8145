"""Finite relative generalized Boolean dynamical systems: K-theory, ideals and certificates."""

from .boolean import Element, FiniteBooleanAlgebra
from .dynamics import (
    AdmissiblePair,
    RelativeGBDS,
    SystemValidationError,
    condition_k,
    enumerate_admissible_pairs,
    make_system,
    quotient_system,
    validate_system,
)
from .extension import Extension, build_subsystem
from .ideals import ideal_k_groups, liftability_report, six_term_rank_check
from .k1gen import build_unitary, k1_generators
from .ktheory import k0_class, k_groups
from .snf import IntegerMatrix, smith_normal_form
from .star import StarAlgebra, Verdict

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePair", "Element", "Extension", "FiniteBooleanAlgebra", "IntegerMatrix",
    "RelativeGBDS", "StarAlgebra", "SystemValidationError", "Verdict",
    "build_subsystem", "build_unitary", "condition_k", "enumerate_admissible_pairs",
    "ideal_k_groups", "k0_class", "k1_generators", "k_groups", "liftability_report",
    "make_system", "quotient_system", "six_term_rank_check", "smith_normal_form", "validate_system",
]
