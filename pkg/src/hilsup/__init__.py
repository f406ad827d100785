"""Finite Hilbert algebras with supremum, their free algebras and d.s. counts."""

from .algebra import (
    FiniteAlgebra,
    ElementSet,
    Homomorphism,
    SizeGuardError,
    make_chain,
    product,
    power,
    validate_hilbert,
    validate_sup,
    check_derived_identities,
    thomas_holds,
    valuedness,
    quotient,
)
from .dedsys import DeductiveSystem, enumerate_ds, classify_all
from .free import FreeAlgebra, build_free, gstar, verify_decomposition, cardinality_checks
from .counting import surjections, beta, eta_via_theorem, eta_closed_form, upper_bound
from .reports import count_report, discrepancy_report

__all__ = [
    "FiniteAlgebra", "ElementSet", "Homomorphism", "SizeGuardError", "make_chain", "product", "power",
    "validate_hilbert", "validate_sup", "check_derived_identities", "thomas_holds", "valuedness", "quotient",
    "DeductiveSystem", "enumerate_ds", "classify_all",
    "FreeAlgebra", "build_free", "gstar", "verify_decomposition", "cardinality_checks",
    "surjections", "beta", "eta_via_theorem", "eta_closed_form", "upper_bound",
    "count_report", "discrepancy_report",
]
