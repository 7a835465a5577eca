"""Exact exterior-algebra computations over Q and prime fields.

Core pieces: runtime-selectable exact coefficient fields, bitmask
monomials with canonical sign conventions, dense exact linear algebra,
degreewise annihilators, truncated minimal free resolutions with Betti
tables and certified regularity lower bounds, a quadric family whose
regularity grows without bound, and a deterministic CLI.
"""

from .exterior import (AlgebraContext, Element, basis, coords, from_coords,
                       graded_component, render_element, wedge,
                       wedge_monomials)
from .family import (FamilyInstance, VerificationReport, build_family,
                     characteristic_report, characteristic_scan,
                     check_witness, verify_family)
from .fields import (FieldParseError, FieldSpec, PrimeField, QQ, Rationals,
                     parse_field)
from .linalg import Matrix, SpanBuilder, in_span, kernel_basis, rank, rref
from .parsing import ExpressionError, parse_element
from .resolution import (BettiTable, FreeModule, GradedSubmodule, ModuleMap,
                         SizeGuardError, annihilator, betti_table,
                         ideal_submodule, kernel_submodule,
                         minimal_generators, multiplication_matrix,
                         regularity_lower_bound, syzygy_step)

__version__ = "0.1.0"

__all__ = [
    "AlgebraContext", "Element", "basis", "coords", "from_coords",
    "graded_component", "render_element", "wedge", "wedge_monomials",
    "FamilyInstance", "VerificationReport", "build_family",
    "characteristic_report", "characteristic_scan", "check_witness",
    "verify_family",
    "FieldParseError", "FieldSpec", "PrimeField", "QQ", "Rationals",
    "parse_field",
    "Matrix", "SpanBuilder", "in_span", "kernel_basis", "rank", "rref",
    "ExpressionError", "parse_element",
    "BettiTable", "FreeModule", "GradedSubmodule", "ModuleMap",
    "SizeGuardError", "annihilator", "betti_table", "ideal_submodule",
    "kernel_submodule", "minimal_generators", "multiplication_matrix",
    "regularity_lower_bound", "syzygy_step",
    "__version__",
]
