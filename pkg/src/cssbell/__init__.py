"""Exact logical Bell-measurement efficiencies for CSS codes under linear optics."""

from .codes import (
    CodeError,
    CodeParseError,
    CssCode,
    CssViolationError,
    NoLogicalQubitError,
    color_488,
    golay,
    load_code,
    planar_surface,
    qpc,
    steane,
    validate,
)
from .engine import (
    BudgetExceededError,
    EfficiencyResult,
    InfoConfiguration,
    brute_force_reference,
    decodable,
    efficiency_lossless,
    efficiency_with_loss,
    erasure_coefficients,
    loss_table,
    recoverable_logical_subspace,
)
from .formations import CATALOG, catalog_formation, exhaustive_search
from .measurement import BmAssignment, Formation, InfoSet, charlie_distribution

__version__ = "0.1.0"

__all__ = [
    "BmAssignment",
    "BudgetExceededError",
    "CATALOG",
    "CodeError",
    "CodeParseError",
    "CssCode",
    "CssViolationError",
    "EfficiencyResult",
    "Formation",
    "InfoConfiguration",
    "InfoSet",
    "NoLogicalQubitError",
    "brute_force_reference",
    "catalog_formation",
    "charlie_distribution",
    "color_488",
    "decodable",
    "efficiency_lossless",
    "efficiency_with_loss",
    "erasure_coefficients",
    "exhaustive_search",
    "golay",
    "load_code",
    "loss_table",
    "planar_surface",
    "qpc",
    "recoverable_logical_subspace",
    "steane",
    "validate",
]
