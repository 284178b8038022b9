"""Equally weighted minimum distance estimation of Lorenz-curve families.

The estimator minimizes sum_j (L(u_j; theta) - s_j)^2 over the family's
parameters, where (u_j, s_j) are cumulative population and income shares.
Shape parameters are searched in an unconstrained space through smooth maps
(logistic into bounded intervals, softplus onto half-lines), so the inner
Levenberg-Marquardt iteration never leaves the admissible region:
"constrained" mode maps into the genuine-curve domain, "diagnostic" mode
into a wider numerically evaluable box so breaches can be certified after
the fit.  The general quadratic family is estimated by exact linear least
squares on its implicit form and validity-checked afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, least_squares

from .curves import (
    FAMILIES,
    GQ,
    LorenzModel,
    Ortega,
    ValidityReport,
    check_validity_analytic,
    make_model,
)
from .exceptions import DatasetError, FitError, UnsupportedFamilyError
from .measures import gini_closed

_EQUALITY_TOL = 1e-13
_EARLY_EXIT_RSS = 1e-13


@dataclass(frozen=True)
class GroupedDataset:
    """Interior Lorenz-curve ordinates (u_j, s_j), strictly increasing, s <= u."""

    u: np.ndarray
    s: np.ndarray
    mean: float | None = None
    poverty_line: float | None = None
    id: str = ""

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).copy()
        s = np.asarray(self.s, dtype=float).copy()
        if u.ndim != 1 or s.ndim != 1:
            raise DatasetError("u and s must be one-dimensional")
        if u.shape != s.shape:
            raise DatasetError(f"u and s must match in length, got {u.size} vs {s.size}")
        if u.size < 1:
            raise DatasetError("dataset needs at least one interior point")
        if not np.all(np.isfinite(u)) or not np.all(np.isfinite(s)):
            raise DatasetError("shares must be finite")
        if np.any(u <= 0.0) or np.any(u >= 1.0):
            raise DatasetError("population shares must lie strictly inside (0, 1)")
        if np.any(s <= 0.0) or np.any(s >= 1.0):
            raise DatasetError("income shares must lie strictly inside (0, 1)")
        if np.any(np.diff(u) <= 0.0):
            j = int(np.nonzero(np.diff(u) <= 0.0)[0][0])
            raise DatasetError(f"population shares not increasing at point {j + 2}")
        if np.any(np.diff(s) <= 0.0):
            j = int(np.nonzero(np.diff(s) <= 0.0)[0][0])
            raise DatasetError(f"income shares not increasing at point {j + 2}")
        if np.any(s > u):
            j = int(np.nonzero(s > u)[0][0])
            raise DatasetError(
                f"point {j + 1} lies above the diagonal (s={s[j]!r} > u={u[j]!r})"
            )
        if self.mean is not None and not self.mean > 0:
            raise DatasetError(f"mean income must be positive, got {self.mean}")
        if self.poverty_line is not None and not self.poverty_line > 0:
            raise DatasetError(f"poverty line must be positive, got {self.poverty_line}")
        u.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "s", s)

    @property
    def n_points(self) -> int:
        return int(self.u.size)

    def trapezoid_gini(self) -> float:
        """Gini of the piecewise-linear curve through the observed points."""
        uu = np.concatenate(([0.0], self.u, [1.0]))
        ss = np.concatenate(([0.0], self.s, [1.0]))
        return 1.0 - float(np.sum(np.diff(uu) * (ss[1:] + ss[:-1])))


@dataclass(frozen=True)
class FitConfig:
    mode: str = "constrained"
    multistart: int = 16
    gtol: float = 1e-10
    xtol: float = 1e-12
    max_iterations: int = 500
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("constrained", "diagnostic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.multistart < 1:
            raise ValueError("multistart must be >= 1")


@dataclass(frozen=True)
class FitResult:
    family: str
    model: LorenzModel
    rss: float
    converged: bool
    iterations: int
    validity: ValidityReport
    mode: str
    start: dict[str, float] | None = None
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.model.param_dict(),
            "rss": self.rss,
            "converged": self.converged,
            "iterations": self.iterations,
            "validity": self.validity.to_dict(),
            "mode": self.mode,
            "start": self.start,
            "message": self.message,
        }


@dataclass(frozen=True)
class FitFailure:
    family: str
    error: str


def rss(model: LorenzModel, data: GroupedDataset) -> float:
    """EWMD objective: sum of squared ordinate residuals."""
    with np.errstate(all="ignore"):
        resid = np.asarray(model.evaluate(data.u, strict=False), dtype=float) - data.s
    if not np.all(np.isfinite(resid)):
        return math.inf
    return float(np.dot(resid, resid))


# ---------------------------------------------------------------------------
# smooth reparameterizations


def _logistic(t):
    return 0.5 * (1.0 + np.tanh(0.5 * t))


def _logit(x):
    return math.log(x / (1.0 - x))


def _softplus(t):
    return float(np.logaddexp(0.0, t))


def _softplus_inv(x):
    if x > 30.0:
        return x
    return math.log(math.expm1(x))


class _Interval:
    """Logistic map of the real line onto the open interval (lo, hi)."""

    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = lo, hi

    def forward(self, t: float) -> float:
        return self.lo + (self.hi - self.lo) * float(_logistic(t))

    def inverse(self, x: float) -> float:
        span = self.hi - self.lo
        frac = (x - self.lo) / span
        return _logit(min(max(frac, 1e-12), 1.0 - 1e-12))


class _HalfLine:
    """Softplus map of the real line onto (shift, inf)."""

    def __init__(self, shift: float = 0.0):
        self.shift = shift

    def forward(self, t: float) -> float:
        return self.shift + _softplus(t)

    def inverse(self, x: float) -> float:
        return _softplus_inv(max(x - self.shift, 1e-12))


@dataclass(frozen=True)
class _FamilySpec:
    names: tuple[str, ...]            # internal (possibly reduced) parameter names
    transforms: tuple
    box: tuple[tuple[float, float], ...]  # multistart sampling box, natural space
    assemble: object                  # natural params -> model params tuple
    canonical_equality: tuple[float, ...]


def _identity_assemble(theta):
    return tuple(theta)


def _l3_assemble(theta):
    # reduced (A, b, t): the curve depends on (a, d, s) only through ad and s^d
    big_a, b, t = theta
    return (big_a, b, 1.0, t)


def _family_spec(family: str, mode: str) -> _FamilySpec:
    diag = mode == "diagnostic"
    if family == "kakwani1":
        hi = 2.2 if diag else 1.0
        return _FamilySpec(
            ("a", "beta"),
            (_Interval(0.0, hi), _Interval(0.0, hi)),
            ((0.05, min(hi, 1.0) - 0.05), (0.1, min(hi, 1.0) - 0.05)),
            _identity_assemble,
            (0.0, 1.0),
        )
    if family == "kakwani":
        if not diag:
            raise UnsupportedFamilyError(
                "the three-parameter beta form is only fitted in diagnostic mode; "
                "use family 'kakwani1' for its certified special case"
            )
        return _FamilySpec(
            ("a", "alpha", "beta"),
            (_HalfLine(0.0), _Interval(0.02, 3.0), _Interval(0.02, 3.0)),
            ((0.05, 2.0), (0.2, 2.5), (0.1, 2.2)),
            _identity_assemble,
            (0.0, 1.0, 1.0),
        )
    if family == "ortega":
        b_hi = 3.0 if diag else 1.0
        return _FamilySpec(
            ("a", "b"),
            (_HalfLine(0.0), _Interval(0.0, b_hi)),
            ((0.05, 4.0), (0.1, 0.95)),
            _identity_assemble,
            (0.0, 1.0),
        )
    if family == "l2":
        b_hi = 3.0 if diag else 1.0
        d_map = _Interval(0.25, 4.0) if diag else _HalfLine(1.0)
        return _FamilySpec(
            ("a", "b", "d"),
            (_HalfLine(0.0), _Interval(0.0, b_hi), d_map),
            ((0.05, 3.0), (0.1, 0.95), (0.5 if diag else 1.05, 3.5)),
            _identity_assemble,
            (0.0, 1.0, 1.0),
        )
    if family == "l3":
        b_hi = 3.0 if diag else 1.0
        return _FamilySpec(
            ("ad", "b", "s^d"),
            (_HalfLine(0.0), _Interval(0.0, b_hi), _Interval(0.0, 1.0)),
            ((0.05, 3.0), (0.1, 0.95), (0.1, 0.95)),
            _l3_assemble,
            (0.0, 1.0, 1.0),
        )
    raise UnsupportedFamilyError(f"unknown family {family!r}")


def _mom_ortega_a(target_gini: float, b0: float) -> float:
    """Invert the closed-form Gini in a at fixed b for a warm start."""
    lo, hi = 1e-6, 60.0
    g = lambda a: gini_closed(Ortega(a, b0)) - target_gini
    if g(lo) >= 0.0:
        return 0.01
    if g(hi) <= 0.0:
        return hi
    return float(brentq(g, lo, hi, xtol=1e-6))


def _warm_starts(
    family: str, data: GroupedDataset, mode: str, seed: int | None
) -> list[tuple[float, ...]]:
    g0 = min(max(data.trapezoid_gini(), 1e-3), 0.95)
    if family == "kakwani1":
        a0 = min(max(g0 * (1.7 * 2.7) / 2.0, 0.02), 0.98)
        return [(a0, 0.7), (0.5, 0.5)]
    if family == "kakwani":
        a0 = min(max(g0 * (1.7 * 2.7) / 2.0, 0.02), 0.98)
        return [(a0, 1.0, 0.7), (0.5, 0.5, 0.5)]
    a1 = _mom_ortega_a(g0, 0.7)
    if family == "ortega":
        return [(a1, 0.7), (1.0, 0.5)]
    try:
        ortega_fit = ewmd_fit(data, "ortega", FitConfig(mode=mode, multistart=4, seed=seed))
        a2, b2 = ortega_fit.model.a, ortega_fit.model.b
    except Exception:
        a2, b2 = a1, 0.7
    b2 = min(max(b2, 0.05), 2.9)
    if family == "l2":
        return [(max(a2, 1e-3), b2, 1.001), (a1, 0.7, 1.5)]
    if family == "l3":
        return [(max(a2, 1e-3), b2, 0.9), (a1, 0.7, 0.5)]
    raise UnsupportedFamilyError(f"unknown family {family!r}")


def _latin_hypercube(rng: np.random.Generator, box, count: int) -> np.ndarray:
    dims = len(box)
    if count <= 0:
        return np.empty((0, dims))
    samples = np.empty((count, dims))
    for j, (lo, hi) in enumerate(box):
        strata = (rng.permutation(count) + rng.random(count)) / count
        samples[:, j] = lo + (hi - lo) * strata
    return samples


def _is_equality_data(data: GroupedDataset) -> bool:
    return float(np.max(data.u - data.s)) < _EQUALITY_TOL


def _fit_gq(data: GroupedDataset, config: FitConfig) -> FitResult:
    coeffs, _ = gq_implicit_fit(data)
    model = GQ(*coeffs, mode=config.mode)
    return FitResult(
        family="gq",
        model=model,
        rss=rss(model, data),
        converged=True,
        iterations=1,
        validity=check_validity_analytic(model),
        mode=config.mode,
        start=None,
        message="exact linear least squares on the implicit quadratic form",
    )


def gq_implicit_fit(data: GroupedDataset) -> tuple[tuple[float, float, float], float]:
    """Exact least-squares coefficients of the implicit quadratic form.

    Regresses s(1-s) on (u^2 - s), s(u - 1) and (u - s) without intercept;
    returns the coefficients and the implicit-form residual sum of squares.
    """
    if data.n_points < 3:
        raise FitError("GQ regression needs at least 3 interior points")
    u, s = data.u, data.s
    design = np.column_stack((u * u - s, s * (u - 1.0), u - s))
    target = s * (1.0 - s)
    coeffs, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    resid = design @ coeffs - target
    return (float(coeffs[0]), float(coeffs[1]), float(coeffs[2])), float(resid @ resid)


def gq_implicit_rss(coeffs, data: GroupedDataset) -> float:
    """Implicit-form objective at arbitrary coefficients (for cross-checking)."""
    a, b, c = (float(v) for v in coeffs)
    u, s = data.u, data.s
    resid = a * (u * u - s) + b * s * (u - 1.0) + c * (u - s) - s * (1.0 - s)
    return float(resid @ resid)


def ewmd_fit(data: GroupedDataset, family: str, config: FitConfig | None = None) -> FitResult:
    """Fit one family to grouped ordinates by multistart Levenberg-Marquardt."""
    config = config or FitConfig()
    if family not in FAMILIES:
        raise UnsupportedFamilyError(
            f"unknown family {family!r}; expected one of {sorted(FAMILIES)}"
        )

    if _is_equality_data(data):
        spec_eq = _family_spec(family, config.mode) if family != "gq" else None
        params = (1.0, -2.0, 1.0) if family == "gq" else spec_eq.assemble(
            spec_eq.canonical_equality
        )
        model = make_model(family, params, mode=config.mode)
        return FitResult(
            family=family,
            model=model,
            rss=rss(model, data),
            converged=True,
            iterations=0,
            validity=check_validity_analytic(model),
            mode=config.mode,
            start=None,
            message="equality data: unidentified nuisance parameters set canonically",
        )

    if family == "gq":
        return _fit_gq(data, config)

    spec = _family_spec(family, config.mode)
    n_params = len(spec.names)
    if data.n_points < n_params:
        raise FitError(
            f"family {family!r} has {n_params} free parameters but the dataset "
            f"only has {data.n_points} interior points"
        )

    u, s = data.u, data.s

    def residuals(t_vec):
        theta = tuple(tr.forward(t) for tr, t in zip(spec.transforms, t_vec))
        model = make_model(family, spec.assemble(theta), mode="diagnostic")
        with np.errstate(all="ignore"):
            r = np.asarray(model.evaluate(u, strict=False), dtype=float) - s
        return np.nan_to_num(r, nan=1e6, posinf=1e6, neginf=-1e6)

    rng = np.random.default_rng(config.seed)
    starts = _warm_starts(family, data, config.mode, config.seed)
    extra = config.multistart - len(starts)
    if extra > 0:
        starts.extend(map(tuple, _latin_hypercube(rng, spec.box, extra)))
    starts = starts[: max(config.multistart, 1)]

    best = None
    for theta0 in starts:
        t0 = [tr.inverse(x) for tr, x in zip(spec.transforms, theta0)]
        try:
            res = least_squares(
                residuals, t0, method="lm",
                ftol=1e-15, xtol=config.xtol, gtol=config.gtol,
                max_nfev=config.max_iterations * (n_params + 1),
            )
        except Exception:
            continue
        cost = 2.0 * res.cost
        if best is None or cost < best[0]:
            best = (cost, res, theta0)
        if cost < _EARLY_EXIT_RSS:
            break
    if best is None:
        raise FitError(f"all {len(starts)} starts failed for family {family!r}")

    _, res, theta0 = best
    theta = tuple(tr.forward(t) for tr, t in zip(spec.transforms, res.x))
    model = make_model(family, spec.assemble(theta), mode=config.mode)
    return FitResult(
        family=family,
        model=model,
        rss=rss(model, data),
        converged=bool(res.status > 0),
        iterations=int(res.nfev),
        validity=check_validity_analytic(model),
        mode=config.mode,
        start=dict(zip(spec.names, (float(x) for x in theta0))),
    )


DEFAULT_FAMILIES = ("kakwani1", "ortega", "l2", "l3", "gq", "kakwani")


def fit_all(
    data: GroupedDataset,
    config: FitConfig | None = None,
    families=DEFAULT_FAMILIES,
) -> tuple[list[FitResult], list[FitFailure]]:
    """Fit every supported family; failures are recorded, never fatal.

    The beta form is always fitted diagnostically (it is generically
    non-genuine).  Results come back sorted by RSS.
    """
    config = config or FitConfig()
    results: list[FitResult] = []
    failures: list[FitFailure] = []
    for family in families:
        fam_config = config
        if family == "kakwani" and config.mode != "diagnostic":
            fam_config = replace(config, mode="diagnostic")
        try:
            results.append(ewmd_fit(data, family, fam_config))
        except Exception as exc:
            failures.append(FitFailure(family, f"{type(exc).__name__}: {exc}"))
    results.sort(key=lambda r: (math.isnan(r.rss), r.rss))
    return results, failures
