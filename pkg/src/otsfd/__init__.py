"""Finite-difference PDE toolkit built around two accuracy boosters:
choosing the time step that cancels the leading truncation-error bracket
(optimal time step) and adding non-iterative defect-correction terms to the
update formulas.
"""

from .errors import OtsfdError
from .grid import UniformGrid1D, UniformGrid2D, ImplicitDomain, classify_cells
from .ots import (
    LeadingError,
    SchemeDescriptor,
    StabilityBound,
    TimeStepPolicy,
    OPTIMAL,
    optimal_dt,
    policy_dt,
    predicted_order,
)
from .sources import FIXTURES, get_fixture
from .harness import (
    ConvergenceReport,
    StudyConfig,
    fit_order,
    linf_error,
    run_study,
)

__all__ = [
    "OtsfdError",
    "UniformGrid1D",
    "UniformGrid2D",
    "ImplicitDomain",
    "classify_cells",
    "LeadingError",
    "SchemeDescriptor",
    "StabilityBound",
    "TimeStepPolicy",
    "OPTIMAL",
    "optimal_dt",
    "policy_dt",
    "predicted_order",
    "FIXTURES",
    "get_fixture",
    "ConvergenceReport",
    "StudyConfig",
    "fit_order",
    "linf_error",
    "run_study",
]

__version__ = "0.1.0"
