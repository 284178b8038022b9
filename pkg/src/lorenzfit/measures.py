"""Inequality and poverty measures computed from a Lorenz model.

Inequality needs only the curve (scale-free); poverty measures additionally
need the mean income mu and a poverty line z through the quantile function
Q(p) = mu * L'(p).  The headcount H solves Q(H) = z, and

    FGT_k = integral_0^H (1 - Q(p)/z)^k dp      (k = 0, 1, 2)
    Watts = integral_0^H ln(z / Q(p)) dp
    MLD   = -integral_0^1 ln L'(p) dp

with the exact identity FGT_1 = H - (mu/z) L(H).  Closed-form Gini indices
exist for every family except the three-parameter beta form and the general
quadratic, which fall back to 1 - 2 * integral of L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .curves import (
    GQ,
    NEGATIVITY,
    KakwaniBeta,
    KakwaniSpecial,
    L3,
    LorenzModel,
    Ortega,
    SarabiaL2,
    ValidityReport,
    _one_minus_pow1m,
    check_validity_numeric,
)
from .exceptions import (
    CurveDomainError,
    MeasureError,
    NonMonotoneQuantileError,
    UnsupportedFamilyError,
)
from .numerics import QuadratureSpec, RootBracket, beta_fn, find_root, hyp2f1_m1, ln_gamma

_MEASURE_NAMES = ("headcount", "fgt1", "fgt2", "watts", "gini", "mld")
_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class EconomicContext:
    """External scale information: mean income and poverty line, same units."""

    mean: float
    poverty_line: float

    def __post_init__(self):
        if not (self.mean > 0 and math.isfinite(self.mean)):
            raise ValueError(f"mean income must be positive, got {self.mean}")
        if not (self.poverty_line > 0 and math.isfinite(self.poverty_line)):
            raise ValueError(f"poverty line must be positive, got {self.poverty_line}")


@dataclass(frozen=True)
class MeasureSet:
    """The six reported indicators, each paired with the method that produced it."""

    headcount: float | None = None
    fgt1: float | None = None
    fgt2: float | None = None
    watts: float | None = None
    gini: float | None = None
    mld: float | None = None
    methods: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    genuine: bool = True

    def values(self) -> dict[str, float | None]:
        return {name: getattr(self, name) for name in _MEASURE_NAMES}

    def to_dict(self) -> dict:
        out = self.values()
        out["methods"] = dict(self.methods)
        out["errors"] = dict(self.errors)
        out["genuine"] = self.genuine
        return out


def gini_closed(model: LorenzModel) -> float:
    """Closed-form Gini index; unavailable for the beta form and GQ."""
    if isinstance(model, KakwaniSpecial):
        a, be = model.a, model.beta
        return 2.0 * a * beta_fn(2.0, be + 1.0)
    if isinstance(model, Ortega):
        a, b = model.a, model.b
        return 1.0 - 2.0 * (
            1.0 / (a + 1.0)
            - math.exp(ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0))
        )
    if isinstance(model, SarabiaL2):
        a, b, d = model.a, model.b, model.d
        return 1.0 - 2.0 * (
            1.0 / (a + 1.0)
            - math.exp(
                ln_gamma(b + 1.0) + ln_gamma((a + 1.0) / d)
                - ln_gamma((a + b * d + d + 1.0) / d)
            ) / d
        )
    if isinstance(model, L3):
        ad = model.a * model.d
        t = model.s ** model.d
        denom = float(_one_minus_pow1m(t, model.b))
        f_m1 = hyp2f1_m1(-model.b, ad + 1.0, ad + 2.0, t)
        return 1.0 + 2.0 * f_m1 / ((ad + 1.0) * denom)
    raise UnsupportedFamilyError(
        f"no closed-form Gini for family {model.family!r}; use gini_numeric"
    )


def gini_numeric(model: LorenzModel, spec: QuadratureSpec | None = None) -> float:
    """Gini as 1 - 2 * integral of L over [0, 1] by adaptive quadrature."""
    spec = spec or QuadratureSpec(atol=1e-11, rtol=1e-11)
    area = numerics.integrate(lambda p: model.evaluate(p), 0.0, 1.0, spec)
    return 1.0 - 2.0 * area


def generalized_gini(model: LorenzModel, nu: float, method: str = "auto") -> float:
    """Distribution-weighted Gini G(nu) = 1 - nu(nu+1) int (1-p)^(nu-1) L(p) dp.

    Reduces to the ordinary Gini at nu = 1.  The certified two-parameter
    family has the closed form nu(nu+1) a / ((beta+nu)(beta+nu+1)).
    """
    if not nu >= 1.0:
        raise CurveDomainError(f"generalized Gini requires nu >= 1, got {nu}")
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "closed") and isinstance(model, KakwaniSpecial):
        a, be = model.a, model.beta
        return nu * (nu + 1.0) * a / ((be + nu) * (be + nu + 1.0))
    if method == "closed":
        raise UnsupportedFamilyError(
            f"no closed-form generalized Gini for family {model.family!r}"
        )
    val = numerics.integrate(
        lambda p: (1.0 - p) ** (nu - 1.0) * model.evaluate(p), 0.0, 1.0,
        QuadratureSpec(atol=1e-11, rtol=1e-11),
    )
    return 1.0 - nu * (nu + 1.0) * val


def quantile(model: LorenzModel, p, ctx: EconomicContext):
    """Income at population quantile p: Q(p) = mu * L'(p)."""
    return ctx.mean * model.derivative(p)


def _check_monotone_quantile(model: LorenzModel, probes: int = 257) -> None:
    grid = np.linspace(0.0, 1.0, probes)[1:-1]
    slopes = model.derivative(grid)
    if np.any(np.isnan(slopes)):
        raise NonMonotoneQuantileError("quantile function undefined on (0, 1)")
    diffs = np.diff(slopes)
    scale = np.nanmax(np.abs(slopes[np.isfinite(slopes)])) if np.isfinite(slopes).any() else 1.0
    if np.any(diffs < -1e-9 * max(scale, 1.0)):
        raise NonMonotoneQuantileError(
            "quantile function is decreasing on the probe grid (non-genuine model)"
        )


def headcount(model: LorenzModel, ctx: EconomicContext) -> float:
    """Population share below the poverty line: the root of mu L'(p) = z."""
    mu, z = ctx.mean, ctx.poverty_line
    _check_monotone_quantile(model)
    if z <= mu * model.slope_at_zero():
        return 0.0
    top = model.slope_at_one()
    if math.isfinite(top) and z >= mu * top:
        return 1.0

    def objective(p: float) -> float:
        return mu * float(model.derivative(p)) - z

    hi = 1.0 - 1e-13
    if objective(hi) <= 0.0:
        return 1.0  # line above every float-resolvable quantile
    lo = 1e-13
    if objective(lo) >= 0.0:
        return 0.0
    return find_root(objective, RootBracket(lo, hi, tol=1e-13))


def fgt(model: LorenzModel, ctx: EconomicContext, order: int) -> float:
    """Poverty gap family: headcount (0), normalized gap (1), severity (2)."""
    if order not in (0, 1, 2):
        raise ValueError(f"FGT order must be 0, 1 or 2, got {order}")
    h = headcount(model, ctx)
    if order == 0 or h == 0.0:
        return h if order == 0 else 0.0
    _require_nonnegative_curve(model)
    mu, z = ctx.mean, ctx.poverty_line
    if order == 1:
        return h - (mu / z) * model.evaluate(h)
    return numerics.integrate(
        lambda p: (1.0 - mu * float(model.derivative(p)) / z) ** 2, 0.0, h, _QUAD
    )


def watts(model: LorenzModel, ctx: EconomicContext) -> float:
    """First distribution-sensitive poverty measure, log gap below the line."""
    h = headcount(model, ctx)
    if h == 0.0:
        return 0.0
    _require_nonnegative_curve(model)
    mu, z = ctx.mean, ctx.poverty_line

    def integrand(p: float) -> float:
        return math.log(z / (mu * float(model.derivative(p))))

    return numerics.integrate(integrand, 0.0, h, _QUAD)


def mld(model: LorenzModel, ctx: EconomicContext | None = None) -> float:
    """Mean log deviation -int ln L'(p) dp; scale-free, mu cancels."""
    _require_nonnegative_curve(model)
    return -numerics.integrate(
        lambda p: math.log(float(model.derivative(p))), 0.0, 1.0, _QUAD
    )


def _require_nonnegative_curve(model: LorenzModel) -> None:
    """Poverty integrals are meaningless once L dips below zero."""
    grid = np.linspace(0.0, 1.0, 513)
    values = model.evaluate(grid, strict=False)
    if np.any(np.isnan(values)):
        raise MeasureError("curve undefined inside (0, 1)")
    if float(np.min(values)) < -1e-12:
        raise MeasureError("curve takes negative values; measure is ill-defined")


def measure_set(
    model: LorenzModel,
    ctx: EconomicContext,
    validity: ValidityReport | None = None,
) -> MeasureSet:
    """Bundle all six measures, recording per-measure failures instead of raising."""
    if validity is None:
        validity = check_validity_numeric(model)
    negative_curve = any(v.kind == NEGATIVITY for v in validity.violations)

    values: dict[str, float | None] = {}
    methods: dict[str, str] = {}
    errors: dict[str, str] = {}

    def attempt(name, fn, method):
        try:
            value = float(fn())
            if not math.isfinite(value):
                raise MeasureError(f"non-finite result {value!r}")
            values[name] = value
            methods[name] = method
        except Exception as exc:  # aggregate, never abort the bundle
            values[name] = None
            errors[name] = f"{type(exc).__name__}: {exc}"

    if isinstance(model, (KakwaniBeta, GQ)):
        attempt("gini", lambda: gini_numeric(model), "quadrature")
    else:
        attempt("gini", lambda: gini_closed(model), "closed-form")
    attempt("mld", lambda: mld(model), "quadrature")

    if negative_curve:
        for name in ("headcount", "fgt1", "fgt2", "watts"):
            values[name] = None
            errors[name] = "MeasureError: curve takes negative values; measure is ill-defined"
    else:
        attempt("headcount", lambda: headcount(model, ctx), "root-finding")
        attempt("fgt1", lambda: fgt(model, ctx, 1), "closed-form")
        attempt("fgt2", lambda: fgt(model, ctx, 2), "quadrature")
        attempt("watts", lambda: watts(model, ctx), "quadrature")

    return MeasureSet(
        headcount=values.get("headcount"),
        fgt1=values.get("fgt1"),
        fgt2=values.get("fgt2"),
        watts=values.get("watts"),
        gini=values.get("gini"),
        mld=values.get("mld"),
        methods=methods,
        errors=errors,
        genuine=validity.genuine,
    )
