"""Iterated differential forms, polyvectors and integral forms over polynomial charts."""

from __future__ import annotations

from .calculus import (Derivation, TensorField11, apply, dual_basis, evaluate, interior,
                       lift_tensor, pair, wedge)
from .diffops import (DiffOperator, WindowSpec, apply_op, berezin_generator, chi_realize,
                      class_of, cohomology_window, w)
from .errors import (ChartMismatchError, DegreeError, InvariantViolation, IterFormsError,
                     NotClosedError, ParseError, ResourceLimitError, SlotError, UsageError,
                     WindowError)
from .forms import IteratedForm, Poly, Polyvector, coord, d, dual, gen, kappa, project
from .grading import ChartSpec, commutation_sign
from .integral import (adjoint_check_prop2, hat_d, hat_d_lower, hat_d_top, homology,
                       kappa_identity_check, nu, trace)
from .reports import BerezinSection, HomologyReport
from .textio import parse, parse_element, to_text

__all__ = [
    "ChartSpec", "commutation_sign", "IteratedForm", "Polyvector", "Poly", "coord", "gen", "dual",
    "d", "kappa", "project", "Derivation", "TensorField11", "apply", "dual_basis", "evaluate",
    "interior", "lift_tensor", "pair", "wedge", "DiffOperator", "WindowSpec", "apply_op",
    "berezin_generator", "chi_realize", "class_of", "cohomology_window", "w", "nu", "hat_d",
    "hat_d_top", "hat_d_lower", "adjoint_check_prop2", "trace", "kappa_identity_check",
    "homology", "BerezinSection", "HomologyReport", "parse", "parse_element", "to_text",
    "IterFormsError", "UsageError", "ChartMismatchError", "DegreeError", "SlotError",
    "ParseError", "WindowError", "NotClosedError", "ResourceLimitError", "InvariantViolation",
]
