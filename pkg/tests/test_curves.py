import math

import numpy as np
import pytest

from conftest import draw_model
from lorenzfit.curves import (
    CONVEXITY,
    GQ,
    INITIAL_SLOPE,
    NEGATIVITY,
    KakwaniBeta,
    KakwaniSpecial,
    L3,
    Ortega,
    SarabiaL2,
    check_validity_analytic,
    check_validity_numeric,
    make_model,
)
from lorenzfit.exceptions import (
    CurveDomainError,
    NegativeRadicandError,
    ParameterDomainError,
)

ALL_FAMILIES = ("kakwani", "kakwani1", "ortega", "l2", "l3", "gq")
GRID = np.linspace(0.01, 0.99, 33)


class TestEvaluate:
    def test_special_case_is_square(self):
        assert KakwaniSpecial(1.0, 1.0).evaluate(0.5) == pytest.approx(0.25, abs=1e-15)

    def test_beta_counterexample_value(self):
        model = KakwaniBeta(1.0, 0.5, 0.5, mode="diagnostic")
        expected = 0.25 - math.sqrt(0.25 * 0.75)
        assert model.evaluate(0.25) == pytest.approx(expected, abs=1e-14)
        assert expected < 0  # the curve dips below the axis

    def test_truncated_reduction(self):
        assert L3(1.0, 1.0, 1.0, 0.5).evaluate(0.5) == pytest.approx(0.25, abs=1e-14)

    def test_domain_error(self):
        with pytest.raises(CurveDomainError):
            KakwaniSpecial(1.0, 1.0).evaluate(1.5)
        with pytest.raises(CurveDomainError):
            KakwaniSpecial(1.0, 1.0).evaluate(-0.1)

    def test_vectorized_matches_scalar(self, rng):
        model = Ortega(1.3, 0.6)
        vec = model.evaluate(GRID)
        for p, v in zip(GRID, vec):
            assert model.evaluate(float(p)) == v

    def test_gq_negative_radicand(self):
        # m > 0 with the parabola vertex inside (0, 1) and real roots
        model = GQ(-1.24, -1.25, 1.54, mode="diagnostic")
        e, m, n, _, _ = model._coeffs
        assert m > 0 and n * n - 4 * m * e * e > 0 and 0 < -n / (2 * m) < 1
        with pytest.raises(NegativeRadicandError):
            model.evaluate(np.linspace(0, 1, 101))
        lenient = model.evaluate(np.linspace(0, 1, 101), strict=False)
        assert np.isnan(lenient).any()


class TestDerivatives:
    def test_special_case_slope(self):
        assert KakwaniSpecial(1.0, 1.0).derivative(0.3) == pytest.approx(0.6, abs=1e-14)

    def test_initial_slope_limit(self, rng):
        for _ in range(20):
            a = rng.uniform(0.0, 1.0)
            beta = rng.uniform(0.05, 1.0)
            assert KakwaniSpecial(a, beta).derivative(0.0) == pytest.approx(1.0 - a)

    def test_equality_line(self):
        model = Ortega(0.0, 1.0)
        assert np.allclose(model.derivative(np.array([0.0, 0.4, 1.0])), 1.0)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_matches_finite_differences(self, family, rng):
        h = 1e-6
        for _ in range(25):
            model = draw_model(family, rng, valid=True)
            grid = rng.uniform(0.01 + 2 * h, 0.99 - 2 * h, size=9)
            exact = model.derivative(grid)
            fd = (model.evaluate(grid + h) - model.evaluate(grid - h)) / (2 * h)
            assert np.allclose(exact, fd, rtol=1e-6, atol=1e-8)

    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_second_matches_finite_differences(self, family, rng):
        h = 1e-5
        for _ in range(25):
            model = draw_model(family, rng, valid=True)
            grid = rng.uniform(0.05, 0.95, size=9)
            exact = model.second_derivative(grid)
            fd = (model.derivative(grid + h) - model.derivative(grid - h)) / (2 * h)
            assert np.allclose(exact, fd, rtol=2e-5, atol=1e-7)

    def test_special_case_curvature_formula(self):
        # a beta (1-p)^(beta-2) (2 - p - beta p) at a = 0.5, beta = 0.5, p = 0.5
        expected = 0.25 * 0.5 ** -1.5 * (2.0 - 0.5 - 0.25)
        assert KakwaniSpecial(0.5, 0.5).second_derivative(0.5) == pytest.approx(expected)
        assert KakwaniSpecial(1.0, 1.0).second_derivative(0.5) == pytest.approx(2.0)
        assert Ortega(0.0, 1.0).second_derivative(0.5) == pytest.approx(0.0)

    def test_steep_tail_reported_as_infinite(self):
        assert KakwaniSpecial(1.0, 0.5).derivative(1.0) == math.inf
        assert Ortega(1.0, 0.5).derivative(1.0) == math.inf


class TestNesting:
    def test_l3_reduces_to_power_exponent(self, rng):
        p = np.linspace(0.0, 1.0, 10_001)
        for _ in range(10):
            a, b = rng.uniform(0.1, 2.0), rng.uniform(0.1, 1.0)
            diff = L3(a, b, 1.0, 1.0).evaluate(p) - Ortega(a, b).evaluate(p)
            assert np.max(np.abs(diff)) < 1e-14

    def test_l2_reduces_to_power_exponent(self, rng):
        p = np.linspace(0.0, 1.0, 10_001)
        for _ in range(10):
            a, b = rng.uniform(0.1, 2.0), rng.uniform(0.1, 1.0)
            diff = SarabiaL2(a, b, 1.0).evaluate(p) - Ortega(a, b).evaluate(p)
            assert np.max(np.abs(diff)) < 1e-14


class TestConstructionModes:
    def test_constrained_rejects_breach(self):
        with pytest.raises(ParameterDomainError):
            KakwaniSpecial(1.5, 0.5)
        with pytest.raises(ParameterDomainError):
            Ortega(-0.1, 0.5)
        with pytest.raises(ParameterDomainError):
            L3(1.0, 1.0, 0.5, 0.5)

    def test_diagnostic_records_breach(self):
        model = SarabiaL2(1.0, 1.5, 2.0, mode="diagnostic")
        assert any("b" in breach for breach in model.domain_violations())

    def test_nonfinite_rejected_in_both_modes(self):
        with pytest.raises(ParameterDomainError):
            Ortega(math.nan, 0.5, mode="diagnostic")

    def test_gq_coefficients_unconstrained(self):
        GQ(-5.0, 3.0, -2.0)  # any finite reals construct


class TestAnalyticValidity:
    def test_beta_counterexample(self):
        report = check_validity_analytic(KakwaniBeta(1.0, 0.5, 0.5, mode="diagnostic"))
        assert not report.genuine

    def test_certified_slice(self):
        report = check_validity_analytic(KakwaniBeta(0.5, 1.0, 0.5))
        assert report.genuine

    def test_slope_violation_named(self):
        report = check_validity_analytic(KakwaniBeta(0.5, 0.7, 0.5, mode="diagnostic"))
        assert not report.genuine
        assert any(v.kind == INITIAL_SLOPE for v in report.violations)

    def test_convexity_violation_named(self):
        report = check_validity_analytic(KakwaniBeta(0.5, 1.8, 0.5, mode="diagnostic"))
        assert any(v.kind == CONVEXITY for v in report.violations)

    def test_gq_conditions(self):
        assert check_validity_analytic(GQ(1.0, -2.0, 1.0)).genuine
        # e > 0 breaks the lower endpoint
        assert not check_validity_analytic(GQ(0.0, -2.0, -0.3)).genuine


class TestNumericValidity:
    def test_beta_counterexample_negative_region(self):
        report = check_validity_numeric(KakwaniBeta(1.0, 0.5, 0.5, mode="diagnostic"))
        assert not report.genuine
        kinds = {v.kind for v in report.violations}
        assert NEGATIVITY in kinds
        # negative throughout (0, 1/2): interior minimum at p = 1/2 - sqrt(2)/4
        p_star = 0.5 - math.sqrt(2.0) / 4.0
        true_min = p_star - math.sqrt(p_star * (1.0 - p_star))
        assert report.min_lorenz == pytest.approx(true_min, abs=1e-7)
        model = KakwaniBeta(1.0, 0.5, 0.5, mode="diagnostic")
        inside = np.linspace(0.01, 0.49, 50)
        assert np.all(model.evaluate(inside) < 0)

    def test_boundary_case_genuine(self):
        assert check_validity_numeric(KakwaniSpecial(1.0, 0.5)).genuine

    def test_square_curve_genuine(self):
        assert check_validity_numeric(Ortega(1.0, 1.0)).genuine

    def test_grid_size_validation(self):
        with pytest.raises(ValueError):
            check_validity_numeric(Ortega(1.0, 1.0), grid_size=10)

    def test_report_dict_round_trip(self):
        report = check_validity_numeric(Ortega(1.0, 1.0))
        doc = report.to_dict()
        assert doc["genuine"] is True and doc["violations"] == []


class TestGenuineCurveProperties:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_endpoints_monotone_below_diagonal(self, family, rng):
        p = np.linspace(0.0, 1.0, 10_001)
        for _ in range(20):
            model = draw_model(family, rng, valid=True)
            assert check_validity_analytic(model).genuine
            values = model.evaluate(p)
            tol = 1e-12 if family == "gq" else 0.0
            assert abs(values[0]) <= tol
            assert abs(values[-1] - 1.0) <= tol
            assert np.all(np.diff(values) >= -1e-12)
            assert np.all(values <= p + 1e-12)


class TestAgreement:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_analytic_and_numeric_verdicts_agree(self, family, rng):
        # fast spot check; the acceptance suite runs the full thousand draws
        for k in range(200):
            model = draw_model(family, rng, valid=(k % 2 == 0))
            analytic = check_validity_analytic(model)
            numeric = check_validity_numeric(model)
            assert analytic.genuine == numeric.genuine, (
                f"{family} disagreement at {model.param_dict()}: "
                f"analytic={analytic.genuine} numeric={numeric.genuine} "
                f"({[v.kind for v in numeric.violations]})"
            )


class TestMakeModel:
    def test_round_trip(self):
        model = make_model("l3", (0.5, 0.8, 1.5, 0.7))
        assert model.params == (0.5, 0.8, 1.5, 0.7)

    def test_unknown_family(self):
        with pytest.raises(CurveDomainError):
            make_model("pareto", (1.0,))

    def test_wrong_arity(self):
        with pytest.raises(CurveDomainError):
            make_model("ortega", (1.0, 0.5, 0.3))
