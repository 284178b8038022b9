"""Special functions, quadrature, and root finding used by the curve measures.

The Gauss hypergeometric function is implemented directly because the Gini
closed form of the truncated four-parameter curve always calls it in the
restricted regime alpha = -b in (-1, 0], gamma = beta + 1, z in [0, 1], where
a plain series (plus a connection formula near z = 1) is fast and accurate.
Quadrature and root finding are thin contracts over scipy's adaptive
Gauss-Kronrod integrator and Brent solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _sp_integrate
from scipy import optimize as _sp_optimize

from .exceptions import (
    CurveDomainError,
    NoSignChangeError,
    QuadratureError,
    SeriesError,
)

_SERIES_TOL = 1e-15
_SERIES_MAX_TERMS = 200_000
# direct series degrades near z=1 (algebraic tail); switch to the connection form
_Z_SWITCH = 0.9


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance budget for adaptive integration."""

    atol: float = 1e-10
    rtol: float = 1e-10
    max_depth: int = 50

    def __post_init__(self):
        if not (self.atol > 0 and self.rtol > 0):
            raise ValueError("quadrature tolerances must be strictly positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


@dataclass(frozen=True)
class RootBracket:
    """Bracketing interval in [0, 1] for a scalar root."""

    p_lo: float
    p_hi: float
    tol: float = 1e-12

    def __post_init__(self):
        if not (0.0 <= self.p_lo < self.p_hi <= 1.0):
            raise ValueError("bracket must satisfy 0 <= p_lo < p_hi <= 1")
        if self.tol <= 0:
            raise ValueError("bracket tolerance must be positive")


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not x > 0:
        raise CurveDomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta_fn(a: float, b: float) -> float:
    """Euler beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), a, b > 0."""
    if not (a > 0 and b > 0):
        raise CurveDomainError(f"beta_fn requires positive arguments, got ({a}, {b})")
    return math.exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def _gauss_series(alpha: float, beta: float, gamma: float, z: float,
                  skip_unit_term: bool = False) -> float:
    """Direct Gauss series; optionally returns the sum without the k=0 term."""
    total = 0.0 if skip_unit_term else 1.0
    term = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0)) * z
        if term == 0.0:
            return total
        total += term
        if abs(term) <= _SERIES_TOL * max(abs(total), 1e-300):
            return total
    raise SeriesError(
        f"2F1 series failed to converge for ({alpha}, {beta}, {gamma}, {z})"
    )


def _gauss_summation(alpha: float, beta: float, gamma: float) -> float:
    """Closed form for 2F1(alpha, beta; gamma; 1) when gamma-alpha-beta > 0."""
    for arg in (gamma, gamma - alpha, gamma - beta):
        if arg <= 0:
            raise SeriesError(
                "Gauss summation needs positive gamma arguments; "
                f"got gamma={gamma}, alpha={alpha}, beta={beta}"
            )
    return math.exp(
        ln_gamma(gamma) + ln_gamma(gamma - alpha - beta)
        - ln_gamma(gamma - alpha) - ln_gamma(gamma - beta)
    )


def _near_one_connection(alpha: float, beta: float, gamma: float, z: float) -> float:
    """Connection formula at z -> 1 for non-integer gamma-alpha-beta.

    2F1(a,b;c;z) = A * 2F1(a,b;a+b-c+1;1-z)
                 + B * (1-z)^(c-a-b) * 2F1(c-a,c-b;c-a-b+1;1-z)

    In the regime gamma = beta + 1 the first series collapses to z^(-beta).
    """
    w = 1.0 - z
    gab = gamma - alpha - beta
    a_coef = _gauss_summation(alpha, beta, gamma)
    b_coef = (
        math.gamma(gamma) * math.gamma(-gab)
        / (math.gamma(alpha) * math.gamma(beta))
    )
    if abs(gamma - (beta + 1.0)) < 1e-12:
        first = a_coef * z ** (-beta)
    else:
        first = a_coef * _gauss_series(alpha, beta, alpha + beta - gamma + 1.0, w)
    second = b_coef * w ** gab * _gauss_series(gamma - alpha, gamma - beta, gab + 1.0, w)
    return first + second


def hyp2f1(alpha: float, beta: float, gamma: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(alpha, beta; gamma; z) on z in [0, 1].

    At z = 1 the Gauss summation theorem is used; it requires
    gamma - alpha - beta > 0 and raises otherwise.
    """
    if _is_nonpositive_integer(gamma):
        raise CurveDomainError(f"gamma must not be a nonpositive integer, got {gamma}")
    if not 0.0 <= z <= 1.0:
        raise CurveDomainError(f"z must lie in [0, 1], got {z}")

    if _is_nonpositive_integer(alpha):
        # terminating polynomial of degree -alpha, exact at any z
        total, term = 1.0, 1.0
        for k in range(int(-alpha)):
            term *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0)) * z
            total += term
        return total
    if z == 1.0:
        if gamma - alpha - beta <= 0:
            raise SeriesError(
                f"2F1 diverges at z=1 when gamma-alpha-beta <= 0 "
                f"(got {gamma - alpha - beta})"
            )
        return _gauss_summation(alpha, beta, gamma)
    if z > _Z_SWITCH and not float(gamma - alpha - beta).is_integer():
        return _near_one_connection(alpha, beta, gamma, z)
    return _gauss_series(alpha, beta, gamma, z)


def hyp2f1_m1(alpha: float, beta: float, gamma: float, z: float) -> float:
    """2F1(alpha, beta; gamma; z) - 1 with full relative accuracy near z = 0.

    The Gini closed form of the truncated curve divides this difference by a
    quantity of the same order, so summing from k = 1 avoids cancellation.
    """
    if _is_nonpositive_integer(gamma):
        raise CurveDomainError(f"gamma must not be a nonpositive integer, got {gamma}")
    if not 0.0 <= z <= 1.0:
        raise CurveDomainError(f"z must lie in [0, 1], got {z}")
    if z == 0.0:
        return 0.0
    if z <= _Z_SWITCH or _is_nonpositive_integer(alpha):
        if _is_nonpositive_integer(alpha):
            total, term = 0.0, 1.0
            for k in range(int(-alpha)):
                term *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0)) * z
                total += term
            return total
        return _gauss_series(alpha, beta, gamma, z, skip_unit_term=True)
    return hyp2f1(alpha, beta, gamma, z) - 1.0


def integrate(f: Callable[[float], float], lo: float, hi: float,
              spec: QuadratureSpec | None = None) -> float:
    """Adaptive Gauss-Kronrod integral of f over (lo, hi).

    Endpoints are never evaluated, so integrable endpoint singularities
    (log or power) are handled by the adaptive rule directly.
    """
    spec = spec or QuadratureSpec()
    if lo == hi:
        return 0.0
    with np.errstate(all="ignore"):
        out = _sp_integrate.quad(
            f, lo, hi,
            epsabs=spec.atol, epsrel=spec.rtol, limit=spec.max_depth,
            full_output=1,
        )
    value, abserr = out[0], out[1]
    ok = len(out) < 4  # quad appends a message only on trouble
    if not ok and abserr > max(spec.atol, spec.rtol * abs(value)):
        raise QuadratureError(
            f"quadrature exhausted depth {spec.max_depth}: "
            f"estimate {value!r} with error bound {abserr!r}",
            estimate=value, error_bound=abserr,
        )
    return value


def find_root(f: Callable[[float], float], bracket: RootBracket) -> float:
    """Root of f inside the bracket via Brent's method.

    If f has the same sign at both ends, a uniform pre-scan looks for an
    interior sign change before giving up.
    """
    lo, hi = bracket.p_lo, bracket.p_hi
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        grid = np.linspace(lo, hi, 65)
        values = np.array([f(p) for p in grid])
        signs = np.sign(values)
        flips = np.nonzero(signs[:-1] * signs[1:] <= 0)[0]
        if flips.size == 0:
            raise NoSignChangeError(
                f"no sign change of objective on [{lo}, {hi}]"
            )
        lo, hi = float(grid[flips[0]]), float(grid[flips[0] + 1])
    return float(_sp_optimize.brentq(f, lo, hi, xtol=bracket.tol, maxiter=200))
