"""Kloosterman sums and certified non-vanishing of Hilbert Poincare series
over real quadratic fields."""

__version__ = "0.1.0"

from .field import Elt, RealQuadraticField, make_field, parse_field_spec
from .ideals import FractionalIdeal, IdealHNF
from .cyclotomic import CyclotomicInteger
from .kloosterman import KloostermanQuery, kloosterman_exact, weil_bound
from .poincare import (CertifyBudget, PoincareParams, certify_nonvanishing,
                       coefficient, coefficient_tilde, effective_constants,
                       threshold_cor33, threshold_thm32, threshold_thm35)
from .hecke import CoeffFunction, HeckeContext, hecke_action, pairing

__all__ = [
    "Elt", "RealQuadraticField", "make_field", "parse_field_spec",
    "FractionalIdeal", "IdealHNF", "CyclotomicInteger", "KloostermanQuery",
    "kloosterman_exact", "weil_bound", "CertifyBudget", "PoincareParams",
    "certify_nonvanishing", "coefficient", "coefficient_tilde",
    "effective_constants", "threshold_cor33", "threshold_thm32",
    "threshold_thm35", "CoeffFunction", "HeckeContext", "hecke_action",
    "pairing",
]
