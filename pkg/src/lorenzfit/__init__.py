"""Parametric Lorenz curves for grouped income data.

Fits curve families to cumulative (population share, income share) points by
equally weighted minimum distance, certifies whether fitted curves are
genuine Lorenz curves, computes inequality and poverty measures, and
quantifies bias and standard errors by Monte Carlo simulation.
"""

from .curves import (
    FAMILIES,
    GQ,
    KakwaniBeta,
    KakwaniSpecial,
    L3,
    LorenzModel,
    Ortega,
    SarabiaL2,
    ValidityReport,
    check_validity_analytic,
    check_validity_numeric,
    make_model,
)
from .estimation import (
    FitConfig,
    FitResult,
    GroupedDataset,
    ewmd_fit,
    fit_all,
    rss,
)
from .estimator import LorenzCurveEstimator
from .measures import (
    EconomicContext,
    MeasureSet,
    fgt,
    generalized_gini,
    gini_closed,
    gini_numeric,
    headcount,
    measure_set,
    mld,
    quantile,
    watts,
)
from .montecarlo import (
    SimConfig,
    SimSummary,
    estimation_error,
    group_shares,
    sample_incomes,
    simulate,
)
from .numerics import QuadratureSpec, RootBracket, find_root, integrate

__version__ = "0.1.0"

__all__ = [
    "FAMILIES",
    "GQ",
    "KakwaniBeta",
    "KakwaniSpecial",
    "L3",
    "LorenzModel",
    "Ortega",
    "SarabiaL2",
    "ValidityReport",
    "check_validity_analytic",
    "check_validity_numeric",
    "make_model",
    "FitConfig",
    "FitResult",
    "GroupedDataset",
    "ewmd_fit",
    "fit_all",
    "rss",
    "LorenzCurveEstimator",
    "EconomicContext",
    "MeasureSet",
    "fgt",
    "generalized_gini",
    "gini_closed",
    "gini_numeric",
    "headcount",
    "measure_set",
    "mld",
    "quantile",
    "watts",
    "SimConfig",
    "SimSummary",
    "estimation_error",
    "group_shares",
    "sample_incomes",
    "simulate",
    "QuadratureSpec",
    "RootBracket",
    "find_root",
    "integrate",
    "__version__",
]
