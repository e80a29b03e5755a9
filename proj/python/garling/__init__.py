"""Exact sequence-space norms over weighted selections and rearrangements.

The package wraps a C++ core.  ``Weight`` builds a weight sequence from a
spec string (``pow:a=0.5``, ``logpow:a=0.5,b=-1``, ``table:1,0.5,0.25``,
``file:/path``); ``Sequence`` holds a finitely supported sequence built from
a dense list or an ``{index: value}`` mapping.  On top of those sit the norm
family (``garling_norm``, ``lorentz_norm``, ``weak_lorentz_quasinorm``,
``lp_norm``), minimality helpers, the spreading/extraction operators, and
the desk-scale experiments (``symmetry_defect``, ``select_lp``).
"""

from ._core import (
    BudgetExhausted,
    CapacityError,
    Sequence,
    Weight,
    __version__,
    apply_signs,
    extract,
    garling_norm,
    garling_norm_oracle,
    is_minimal,
    lorentz_norm,
    lp_norm,
    minimal_predecessor,
    project_interval,
    select_lp,
    spread,
    symmetry_defect,
    weak_lorentz_quasinorm,
)

__all__ = [
    "BudgetExhausted",
    "CapacityError",
    "Sequence",
    "Weight",
    "__version__",
    "apply_signs",
    "extract",
    "garling_norm",
    "garling_norm_oracle",
    "is_minimal",
    "lorentz_norm",
    "lp_norm",
    "minimal_predecessor",
    "project_interval",
    "select_lp",
    "spread",
    "symmetry_defect",
    "weak_lorentz_quasinorm",
]
