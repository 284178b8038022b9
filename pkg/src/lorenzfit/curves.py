"""Parametric Lorenz-curve families and genuineness certification.

A function L on [0, 1] is a genuine Lorenz curve iff

    L(0) = 0,   L(1) = 1,   L'(0+) >= 0,   L''(p) >= 0 on (0, 1),

which also forces 0 <= L(p) <= p.  The three-parameter beta-form curve
``p - a p^alpha (1-p)^beta`` fails these conditions except on the slice
alpha = 1, 0 <= a <= 1, 0 < beta <= 1; that slice and the families grown out
of it (power-exponent, inner-power, upper-truncated) are implemented here
together with the general quadratic benchmark.

Every family is an immutable dataclass.  ``mode="constrained"`` enforces the
parameter domain at construction; ``mode="diagnostic"`` records breaches but
builds the object anyway so that unconstrained fits can be certified after
the fact.  Curve methods accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .exceptions import (
    CurveDomainError,
    NegativeRadicandError,
    ParameterDomainError,
)

INF = math.inf

# violation kinds carried by ValidityReport
ENDPOINT_ZERO = "L(0) != 0"
ENDPOINT_ONE = "L(1) != 1"
INITIAL_SLOPE = "L'(0+) < 0"
CONVEXITY = "L'' < 0"
NEGATIVITY = "L < 0"
PARAMETER_DOMAIN = "parameter domain breach"

MODES = ("constrained", "diagnostic")


def _one_minus_pow1m(t, b):
    """1 - (1-t)^b computed without cancellation for small t (exact at t=1)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return -np.expm1(b * np.log1p(-t))


@dataclass(frozen=True)
class Violation:
    kind: str
    location: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidityReport:
    """Genuineness verdict with the list of violated conditions."""

    genuine: bool
    mode: str  # "analytic" | "numeric"
    violations: tuple[Violation, ...]
    first_violation: float | None = None
    min_lorenz: float | None = None

    def __post_init__(self):
        if self.genuine != (len(self.violations) == 0):
            raise ValueError("verdict must be genuine iff no violations")

    def to_dict(self) -> dict:
        return {
            "genuine": self.genuine,
            "mode": self.mode,
            "violations": [
                {"kind": v.kind, "location": v.location, "detail": v.detail}
                for v in self.violations
            ],
            "first_violation": self.first_violation,
            "min_lorenz": self.min_lorenz,
        }


class LorenzModel:
    """Common machinery for all curve families (subclasses are dataclasses)."""

    family: ClassVar[str] = ""
    param_names: ClassVar[tuple[str, ...]] = ()

    # -- construction ------------------------------------------------------
    def _validate(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for value in self.params:
            if not math.isfinite(value):
                raise ParameterDomainError(
                    f"{self.family} parameters must be finite, got {self.params}"
                )
        breaches = self.domain_violations()
        if self.mode == "constrained" and breaches:
            raise ParameterDomainError(
                f"{self.family} parameters outside domain: {'; '.join(breaches)}"
            )

    @property
    def params(self) -> tuple[float, ...]:
        return tuple(float(getattr(self, name)) for name in self.param_names)

    def param_dict(self) -> dict[str, float]:
        return dict(zip(self.param_names, self.params))

    def domain_violations(self) -> list[str]:
        raise NotImplementedError

    # -- evaluation --------------------------------------------------------
    def _lorenz(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _dlorenz(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _d2lorenz(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _as_unit_array(self, p):
        arr = np.asarray(p, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
            raise CurveDomainError("population share p must lie in [0, 1]")
        return arr

    def evaluate(self, p, strict: bool = True):
        """Lorenz ordinate L(p) for p in [0, 1]; scalar in, scalar out."""
        arr = self._as_unit_array(p)
        scalar = arr.ndim == 0
        with np.errstate(all="ignore"):
            out = np.asarray(self._lorenz(np.atleast_1d(arr)), dtype=float)
        return float(out[0]) if scalar else out

    def derivative(self, p):
        """L'(p); endpoints report the one-sided limit (possibly infinite)."""
        arr = self._as_unit_array(p)
        scalar = arr.ndim == 0
        work = np.atleast_1d(arr)
        with np.errstate(all="ignore"):
            out = np.asarray(self._dlorenz(work), dtype=float)
        at0 = work == 0.0
        at1 = work == 1.0
        if at0.any():
            out[at0] = self.slope_at_zero()
        if at1.any():
            out[at1] = self.slope_at_one()
        return float(out[0]) if scalar else out

    def second_derivative(self, p):
        """L''(p) on the open interval (0, 1)."""
        arr = self._as_unit_array(p)
        scalar = arr.ndim == 0
        with np.errstate(all="ignore"):
            out = np.asarray(self._d2lorenz(np.atleast_1d(arr)), dtype=float)
        return float(out[0]) if scalar else out

    def slope_at_zero(self) -> float:
        raise NotImplementedError

    def slope_at_one(self) -> float:
        raise NotImplementedError

    def _analytic_violations(self) -> list[Violation]:
        raise NotImplementedError


@dataclass(frozen=True)
class KakwaniBeta(LorenzModel):
    """Three-parameter beta form p - a p^alpha (1-p)^beta.

    Generically not a genuine Lorenz curve: for 0 < alpha < 1 the initial
    slope diverges to -infinity, for alpha > 1 convexity fails near zero,
    so only the alpha = 1 slice survives certification.
    """

    a: float
    alpha: float
    beta: float
    mode: str = "constrained"

    family: ClassVar[str] = "kakwani"
    param_names: ClassVar[tuple[str, ...]] = ("a", "alpha", "beta")

    def __post_init__(self):
        self._validate()

    def domain_violations(self):
        out = []
        if self.a < 0:
            out.append(f"a >= 0 required, got {self.a}")
        if self.alpha <= 0:
            out.append(f"alpha > 0 required, got {self.alpha}")
        if self.beta <= 0:
            out.append(f"beta > 0 required, got {self.beta}")
        return out

    def _lorenz(self, p):
        return p - self.a * p ** self.alpha * (1.0 - p) ** self.beta

    def _dlorenz(self, p):
        a, al, be = self.a, self.alpha, self.beta
        if a == 0.0:
            return np.ones_like(p)
        return 1.0 - a * p ** (al - 1.0) * (1.0 - p) ** (be - 1.0) * (
            al - al * p - be * p
        )

    def _d2lorenz(self, p):
        a, al, be = self.a, self.alpha, self.beta
        if a == 0.0:
            return np.zeros_like(p)
        s = al + be
        u = (s - s * s) * p * p + (2 * al * be + 2 * al * al - 2 * al) * p + (al - al * al)
        return a * p ** (al - 2.0) * (1.0 - p) ** (be - 2.0) * u

    def slope_at_zero(self):
        if self.a == 0.0:
            return 1.0
        if self.alpha < 1.0:
            return -INF
        if self.alpha == 1.0:
            return 1.0 - self.a
        return 1.0

    def slope_at_one(self):
        if self.a == 0.0:
            return 1.0
        if self.beta < 1.0:
            return INF
        if self.beta == 1.0:
            return 1.0 + self.a
        return 1.0

    def _analytic_violations(self):
        out = [Violation(PARAMETER_DOMAIN, None, d) for d in self.domain_violations()]
        if self.a == 0.0 or out:
            return out
        if self.alpha < 1.0:
            out.append(Violation(INITIAL_SLOPE, 0.0, "L'(0+) = -inf for alpha < 1"))
        elif self.alpha == 1.0:
            if self.a > 1.0:
                out.append(Violation(INITIAL_SLOPE, 0.0, f"L'(0+) = {1.0 - self.a}"))
            if self.beta > 1.0:
                out.append(Violation(CONVEXITY, 1.0, "L'' < 0 near p = 1 for beta > 1"))
        else:
            out.append(Violation(CONVEXITY, 0.0, "L'' < 0 near p = 0 for alpha > 1"))
        return out


@dataclass(frozen=True)
class KakwaniSpecial(LorenzModel):
    """The certified alpha = 1 slice: L(p) = p - a p (1-p)^beta."""

    a: float
    beta: float
    mode: str = "constrained"

    family: ClassVar[str] = "kakwani1"
    param_names: ClassVar[tuple[str, ...]] = ("a", "beta")

    def __post_init__(self):
        self._validate()

    def domain_violations(self):
        out = []
        if not 0.0 <= self.a <= 1.0:
            out.append(f"0 <= a <= 1 required, got {self.a}")
        if not 0.0 < self.beta <= 1.0:
            out.append(f"0 < beta <= 1 required, got {self.beta}")
        return out

    def _lorenz(self, p):
        return p * (1.0 - self.a * (1.0 - p) ** self.beta)

    def _dlorenz(self, p):
        a, be = self.a, self.beta
        if a == 0.0:
            return np.ones_like(p)
        return 1.0 - a * (1.0 - p) ** (be - 1.0) * (1.0 - p - be * p)

    def _d2lorenz(self, p):
        a, be = self.a, self.beta
        if a == 0.0:
            return np.zeros_like(p)
        return a * be * (1.0 - p) ** (be - 2.0) * (2.0 - p - be * p)

    def slope_at_zero(self):
        return 1.0 - self.a

    def slope_at_one(self):
        if self.a == 0.0:
            return 1.0
        if self.beta < 1.0:
            return INF
        if self.beta == 1.0:
            return 1.0 + self.a
        return 1.0

    def _analytic_violations(self):
        out = []
        if self.a == 0.0:
            return out
        if self.a > 1.0:
            out.append(Violation(INITIAL_SLOPE, 0.0, f"L'(0+) = {1.0 - self.a}"))
        if self.a < 0.0:
            out.append(Violation(CONVEXITY, None, "L'' < 0 everywhere for a < 0"))
        if self.beta > 1.0:
            out.append(Violation(CONVEXITY, 1.0, "L'' < 0 near p = 1 for beta > 1"))
        if self.beta <= 0.0:
            out.append(Violation(ENDPOINT_ONE, 1.0, "L(1) < 1 for beta <= 0"))
        return out


@dataclass(frozen=True)
class Ortega(LorenzModel):
    """Power-exponent family L(p) = p^a [1 - (1-p)^b]."""

    a: float
    b: float
    mode: str = "constrained"

    family: ClassVar[str] = "ortega"
    param_names: ClassVar[tuple[str, ...]] = ("a", "b")

    def __post_init__(self):
        self._validate()

    def domain_violations(self):
        out = []
        if self.a < 0:
            out.append(f"a >= 0 required, got {self.a}")
        if not 0.0 < self.b <= 1.0:
            out.append(f"0 < b <= 1 required, got {self.b}")
        return out

    def _lorenz(self, p):
        return p ** self.a * _one_minus_pow1m(p, self.b)

    def _dlorenz(self, p):
        a, b = self.a, self.b
        out = b * p ** a * (1.0 - p) ** (b - 1.0)
        if a != 0.0:
            out = out + a * p ** (a - 1.0) * _one_minus_pow1m(p, b)
        return out

    def _d2lorenz(self, p):
        a, b = self.a, self.b
        out = -b * (b - 1.0) * p ** a * (1.0 - p) ** (b - 2.0)
        if a != 0.0:
            out = out + 2.0 * a * b * p ** (a - 1.0) * (1.0 - p) ** (b - 1.0)
            if a != 1.0:
                out = out + a * (a - 1.0) * p ** (a - 2.0) * _one_minus_pow1m(p, b)
        return out

    def slope_at_zero(self):
        if self.a > 0.0:
            return 0.0
        if self.a == 0.0:
            return self.b
        return INF

    def slope_at_one(self):
        if self.b < 1.0:
            return INF
        if self.b == 1.0:
            return self.a + 1.0
        return self.a

    def _analytic_violations(self):
        return [Violation(PARAMETER_DOMAIN, None, d) for d in self.domain_violations()]


@dataclass(frozen=True)
class SarabiaL2(LorenzModel):
    """Inner-power extension L(p) = p^a [1 - (1-p^d)^b]."""

    a: float
    b: float
    d: float
    mode: str = "constrained"

    family: ClassVar[str] = "l2"
    param_names: ClassVar[tuple[str, ...]] = ("a", "b", "d")

    def __post_init__(self):
        self._validate()

    def domain_violations(self):
        out = []
        if self.a < 0:
            out.append(f"a >= 0 required, got {self.a}")
        if not 0.0 < self.b <= 1.0:
            out.append(f"0 < b <= 1 required, got {self.b}")
        if self.d < 1.0:
            out.append(f"d >= 1 required, got {self.d}")
        return out

    def _inner(self, p):
        """h, h', h'' for h(p) = 1 - (1-p^d)^b."""
        b, d = self.b, self.d
        q = p ** d
        h = _one_minus_pow1m(q, b)
        h1 = b * d * p ** (d - 1.0) * (1.0 - q) ** (b - 1.0)
        h2 = b * d * (
            (d - 1.0) * p ** (d - 2.0) * (1.0 - q) ** (b - 1.0)
            - d * (b - 1.0) * p ** (2.0 * d - 2.0) * (1.0 - q) ** (b - 2.0)
        )
        return h, h1, h2

    def _lorenz(self, p):
        return p ** self.a * _one_minus_pow1m(p ** self.d, self.b)

    def _dlorenz(self, p):
        a = self.a
        h, h1, _ = self._inner(p)
        out = p ** a * h1
        if a != 0.0:
            out = out + a * p ** (a - 1.0) * h
        return out

    def _d2lorenz(self, p):
        a = self.a
        h, h1, h2 = self._inner(p)
        out = p ** a * h2
        if a != 0.0:
            out = out + 2.0 * a * p ** (a - 1.0) * h1
            if a != 1.0:
                out = out + a * (a - 1.0) * p ** (a - 2.0) * h
        return out

    def slope_at_zero(self):
        k = self.a + self.d  # L ~ b p^(a+d) near zero
        if k > 1.0:
            return 0.0
        if k == 1.0:
            return self.b * k
        return INF

    def slope_at_one(self):
        if self.b < 1.0:
            return INF
        if self.b == 1.0:
            return self.a + self.d
        return self.a

    def _analytic_violations(self):
        return [Violation(PARAMETER_DOMAIN, None, d) for d in self.domain_violations()]


@dataclass(frozen=True)
class L3(LorenzModel):
    """Upper-truncated construction with a power-function base CDF.

    L(p) = p^(a d) [1 - (1 - p s^d)^b] / [1 - (1 - s^d)^b].

    The curve depends on (a, d, s) only through A = a d and t = s^d, so the
    family is effectively three-dimensional; individual parameters may be
    unidentified even when the curve itself is pinned down.
    """

    a: float
    b: float
    d: float
    s: float
    mode: str = "constrained"

    family: ClassVar[str] = "l3"
    param_names: ClassVar[tuple[str, ...]] = ("a", "b", "d", "s")

    def __post_init__(self):
        self._validate()

    def domain_violations(self):
        out = []
        if self.a < 0:
            out.append(f"a >= 0 required, got {self.a}")
        if not 0.0 < self.b <= 1.0:
            out.append(f"0 < b <= 1 required, got {self.b}")
        if self.d < 1.0:
            out.append(f"d >= 1 required, got {self.d}")
        if not 0.0 < self.s <= 1.0:
            out.append(f"0 < s <= 1 required, got {self.s}")
        return out

    @property
    def _At(self) -> tuple[float, float, float]:
        """(A, t, D): outer exponent, truncation mass, normalizing constant."""
        t = self.s ** self.d
        return self.a * self.d, t, float(_one_minus_pow1m(t, self.b))

    def _lorenz(self, p):
        A, t, D = self._At
        return p ** A * _one_minus_pow1m(t * p, self.b) / D

    def _dlorenz(self, p):
        A, t, D = self._At
        b = self.b
        out = p ** A * b * t * (1.0 - t * p) ** (b - 1.0) / D
        if A != 0.0:
            out = out + A * p ** (A - 1.0) * _one_minus_pow1m(t * p, b) / D
        return out

    def _d2lorenz(self, p):
        A, t, D = self._At
        b = self.b
        g1 = b * t * (1.0 - t * p) ** (b - 1.0) / D
        out = -b * (b - 1.0) * t * t * p ** A * (1.0 - t * p) ** (b - 2.0) / D
        if A != 0.0:
            out = out + 2.0 * A * p ** (A - 1.0) * g1
            if A != 1.0:
                out = out + A * (A - 1.0) * p ** (A - 2.0) * _one_minus_pow1m(t * p, b) / D
        return out

    def slope_at_zero(self):
        A, t, D = self._At
        if A > 0.0:
            return 0.0
        if A == 0.0:
            return self.b * t / D
        return INF

    def slope_at_one(self):
        A, t, D = self._At
        if t < 1.0:
            return A + self.b * t * (1.0 - t) ** (self.b - 1.0) / D
        if self.b < 1.0:
            return INF
        if self.b == 1.0:
            return A + 1.0
        return A

    def _analytic_violations(self):
        return [Violation(PARAMETER_DOMAIN, None, d) for d in self.domain_violations()]


@dataclass(frozen=True)
class GQ(LorenzModel):
    """General quadratic benchmark, the implicit conic

        L(1-L) = a (p^2 - L) + b L (p-1) + c (p - L),

    solved explicitly as L(p) = -(b p + e + sqrt(m p^2 + n p + e^2)) / 2 with
    e = -(a+b+c+1), m = b^2 - 4a, n = 2be - 4c.  The radicand is evaluated in
    Bernstein form e^2 (1-p)^2 + (n + 2e^2) p (1-p) + (a+c-1)^2 p^2 so the
    endpoint identities hold to rounding for any coefficients with e < 0 and
    a + c >= 1.
    """

    a: float
    b: float
    c: float
    mode: str = "constrained"

    family: ClassVar[str] = "gq"
    param_names: ClassVar[tuple[str, ...]] = ("a", "b", "c")

    def __post_init__(self):
        self._validate()

    def domain_violations(self):
        return []  # coefficients are unconstrained reals; validity is separate

    @property
    def _coeffs(self) -> tuple[float, float, float, float, float]:
        """(e, m, n, K, R) with K = n + 2 e^2, R = (a+c-1)^2."""
        e = -(self.a + self.b + self.c + 1.0)
        m = self.b * self.b - 4.0 * self.a
        n = 2.0 * self.b * e - 4.0 * self.c
        return e, m, n, n + 2.0 * e * e, (self.a + self.c - 1.0) ** 2

    def _radicand(self, p):
        e, _, _, K, R = self._coeffs
        return e * e * (1.0 - p) ** 2 + K * p * (1.0 - p) + R * p * p

    def _radicand_slope(self, p):
        e, _, _, K, R = self._coeffs
        return -2.0 * e * e * (1.0 - p) + K * (1.0 - 2.0 * p) + 2.0 * R * p

    def evaluate(self, p, strict: bool = True):
        arr = self._as_unit_array(p)
        scalar = arr.ndim == 0
        work = np.atleast_1d(arr)
        e, _, _, K, R = self._coeffs
        rad = self._radicand(work)
        tol = 1e-12 * max(1.0, e * e + abs(K) + R)
        bad = rad < -tol
        if bad.any():
            if strict:
                raise NegativeRadicandError(
                    f"negative radicand at p = {float(work[bad][0])!r}"
                )
            rad = np.where(bad, np.nan, rad)
        rad = np.where((rad < 0) & ~bad, 0.0, rad)
        out = -0.5 * (self.b * work + e + np.sqrt(rad))
        return float(out[0]) if scalar else out

    def _lorenz(self, p):  # used by the shared wrapper; lenient by design
        return self.evaluate(p, strict=False)

    def _dlorenz(self, p):
        rad = self._radicand(p)
        rad = np.where(rad < 0, np.nan, rad)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -0.5 * (self.b + self._radicand_slope(p) / (2.0 * np.sqrt(rad)))

    def derivative(self, p):
        arr = self._as_unit_array(p)
        scalar = arr.ndim == 0
        with np.errstate(all="ignore"):
            out = np.asarray(self._dlorenz(np.atleast_1d(arr)), dtype=float)
        return float(out[0]) if scalar else out

    def _d2lorenz(self, p):
        e, m, n, _, _ = self._coeffs
        rad = self._radicand(p)
        rad = np.where(rad <= 0, np.nan, rad)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (n * n - 4.0 * m * e * e) / (8.0 * rad ** 1.5)

    def slope_at_zero(self):
        e, _, n, _, _ = self._coeffs
        if e == 0.0:
            return -INF if n > 0 else math.nan
        return -0.5 * (self.b + n / (2.0 * abs(e)))

    def slope_at_one(self):
        e, _, _, K, R = self._coeffs
        if R == 0.0:
            return INF
        return -0.5 * (self.b + (2.0 * R - K) / (2.0 * math.sqrt(R)))

    def _analytic_violations(self):
        e, m, n, _, R = self._coeffs
        out = []
        if e >= 0.0:
            out.append(Violation(ENDPOINT_ZERO, 0.0, f"L(0) = {-max(e, 0.0)} (e >= 0)"))
        if self.a + self.c < 1.0:
            out.append(Violation(ENDPOINT_ONE, 1.0, f"L(1) = {self.a + self.c}"))
        if self.c < 0.0:
            out.append(Violation(INITIAL_SLOPE, 0.0, "L'(0+) = c/|e| < 0"))
        if m > 0.0:
            disc = n * n - 4.0 * m * e * e
            if disc < 0.0:
                out.append(Violation(CONVEXITY, None, "L'' < 0 everywhere (m > 0)"))
            elif -2.0 * m < n < 0.0:
                out.append(Violation(
                    PARAMETER_DOMAIN, -n / (2.0 * m),
                    "radicand turns negative inside (0, 1)",
                ))
        return out


FAMILIES: dict[str, type[LorenzModel]] = {
    cls.family: cls for cls in (KakwaniBeta, KakwaniSpecial, Ortega, SarabiaL2, L3, GQ)
}


def make_model(family: str, params, mode: str = "constrained") -> LorenzModel:
    """Build a model from a family tag and an ordered parameter sequence."""
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise CurveDomainError(
            f"unknown family {family!r}; expected one of {sorted(FAMILIES)}"
        ) from None
    params = [float(v) for v in params]
    if len(params) != len(cls.param_names):
        raise CurveDomainError(
            f"family {family!r} takes {len(cls.param_names)} parameters "
            f"{cls.param_names}, got {len(params)}"
        )
    return cls(*params, mode=mode)


def check_validity_analytic(model: LorenzModel) -> ValidityReport:
    """Certify genuineness from the family's parameter characterization."""
    violations = tuple(model._analytic_violations())
    locations = [v.location for v in violations if v.location is not None]
    return ValidityReport(
        genuine=not violations,
        mode="analytic",
        violations=violations,
        first_violation=min(locations) if locations else None,
        min_lorenz=None,
    )


def check_validity_numeric(model: LorenzModel, grid_size: int = 10_001) -> ValidityReport:
    """Certify genuineness pointwise on a uniform grid.

    Endpoint values are checked to 1e-10, the initial slope uses the family's
    one-sided limit, convexity and nonnegativity are inspected on the grid.
    """
    if grid_size < 100:
        raise ValueError(f"grid_size must be >= 100, got {grid_size}")
    p = np.linspace(0.0, 1.0, grid_size)
    values = model.evaluate(p, strict=False)
    violations: list[Violation] = []

    nan_mask = np.isnan(values)
    if nan_mask.any():
        loc = float(p[nan_mask][0])
        violations.append(Violation(PARAMETER_DOMAIN, loc, "curve undefined (NaN)"))

    if not abs(values[0]) <= 1e-10:
        violations.append(Violation(ENDPOINT_ZERO, 0.0, f"L(0) = {values[0]!r}"))
    if not abs(values[-1] - 1.0) <= 1e-10:
        violations.append(Violation(ENDPOINT_ONE, 1.0, f"L(1) = {values[-1]!r}"))

    slope0 = model.slope_at_zero()
    if not slope0 >= -1e-10:
        violations.append(Violation(INITIAL_SLOPE, 0.0, f"L'(0+) = {slope0!r}"))

    interior = p[1:-1]
    curvature = model.second_derivative(interior)
    curve_defined = ~np.isnan(values[1:-1])
    conv_bad = (
        (curvature < -1e-10)
        | np.isneginf(curvature)
        | (np.isnan(curvature) & curve_defined)
    )
    if conv_bad.any():
        loc = float(interior[conv_bad][0])
        violations.append(Violation(CONVEXITY, loc, f"L'' = {float(curvature[conv_bad][0])!r}"))

    neg_mask = values < -1e-12
    if neg_mask.any():
        loc = float(p[neg_mask][0])
        violations.append(Violation(NEGATIVITY, loc, f"L = {float(values[neg_mask][0])!r}"))

    finite_vals = values[np.isfinite(values)]
    min_lorenz = float(finite_vals.min()) if finite_vals.size else math.nan
    locations = [v.location for v in violations if v.location is not None]
    return ValidityReport(
        genuine=not violations,
        mode="numeric",
        violations=tuple(violations),
        first_violation=min(locations) if locations else None,
        min_lorenz=min_lorenz,
    )
