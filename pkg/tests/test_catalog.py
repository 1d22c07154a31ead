"""Tests of the closed-form metrics"""

import math

import numpy as np
import pytest
from scipy import integrate

from ricciode.catalog import (
    FORMS,
    Case3,
    EguchiHanson,
    FlatCone,
    FubiniStudy,
    FubiniStudyHyperbolic,
    TaubNUT,
    case3_metric_coeffs,
    case3_rho_of_t,
    case3_t_of_rho,
    make_form,
    ode_residual,
    sample_table,
    to_arclength_jet,
    verify_form,
)
from ricciode.const import CATALOG_COLUMNS, FORM_NAMES, ODE_RESIDUAL_TOL, RICCI_RESIDUAL_TOL
from ricciode.exceptions import DomainError, InvalidJetError, InvalidParamsError
from ricciode.frame_curvature import ricci_from_jet

from .conftest import CASE1, FUBINI_STUDY


class TestMakeForm:
    @pytest.mark.parametrize("name", FORM_NAMES)
    def test_every_name_builds(self, name):
        form = make_form(name)
        assert isinstance(form, FORMS[name])
        assert form.name == name

    def test_unknown_name(self):
        with pytest.raises(InvalidParamsError):
            make_form("schwarzschild")

    @pytest.mark.parametrize("param", [0.0, -1.0, math.inf, math.nan])
    def test_bad_parameter(self, param):
        with pytest.raises(InvalidParamsError):
            make_form("taub-nut", param)

    def test_flat_cone_ignores_parameter(self):
        assert make_form("flat-cone", 7.0).param == 1.0


class TestVerify:
    @pytest.mark.parametrize("name", FORM_NAMES)
    def test_forms_solve_their_system(self, name):
        report = verify_form(make_form(name), points=50)
        assert report.max_ode_residual <= ODE_RESIDUAL_TOL
        assert report.max_ricci_residual <= RICCI_RESIDUAL_TOL

    @pytest.mark.parametrize("name", FORM_NAMES)
    def test_hundred_points(self, name):
        form = make_form(name)
        report = verify_form(form)
        assert report.points == 100
        coords = np.linspace(*form.sample_window, 100)
        r1, r2 = ode_residual(form, form.params, coords)
        assert np.max(np.abs(np.concatenate([r1, r2]))) <= ODE_RESIDUAL_TOL
        assert report.max_ode_residual <= ODE_RESIDUAL_TOL
        assert report.max_ricci_residual <= RICCI_RESIDUAL_TOL

    @pytest.mark.parametrize(
        ["form", "constant"],
        [(FubiniStudy(2.0), 48.0), (FubiniStudyHyperbolic(0.5), -3.0), (TaubNUT(3.0), 0.0)],
    )
    def test_einstein_constant_scales(self, form, constant):
        report = verify_form(form, points=20)
        assert report.einstein_constant == pytest.approx(constant)
        assert report.max_ricci_residual <= RICCI_RESIDUAL_TOL

    def test_wrong_params_leave_a_residual(self):
        form = FubiniStudy(1.0)
        r1, r2 = ode_residual(form, CASE1, np.array([0.3, 0.6]))
        assert np.max(np.abs(np.concatenate([r1, r2]))) > 1e-3

    def test_report_to_dict(self):
        d = verify_form(make_form("eguchi-hanson"), points=10).to_dict()
        assert d["params"] == ["-1/1", "0/1", "2/1", "0/1", "1/1", "0/1"]
        assert d["points"] == 10
        assert len(d["window"]) == 2


class TestTaubNUT:
    def test_values_at_r2(self):
        jet = to_arclength_jet(TaubNUT(1.0), 2.0)
        assert jet.a1 == pytest.approx(math.sqrt(1 / 3))
        assert jet.a2 == pytest.approx(math.sqrt(3) / 2)
        assert jet.a1p == pytest.approx(4 / 9)
        assert jet.a2p == pytest.approx(4 / 3)

    def test_domain(self):
        with pytest.raises(DomainError):
            TaubNUT(1.0).evaluate(1.0)
        with pytest.raises(DomainError):
            TaubNUT(1.0).evaluate(np.array([2.0, 0.5]))

    def test_arclength_inverse(self):
        form = TaubNUT(1.5)
        for r in [1.6, 3.0, 40.0]:
            assert form.coord_at_arclength(form.arclength(r)) == pytest.approx(r, rel=1e-12)

    def test_nonpositive_arclength(self):
        with pytest.raises(DomainError):
            TaubNUT(1.0).coord_at_arclength(0.0)


class TestEguchiHanson:
    def test_arclength_derivative_is_speed(self):
        form = EguchiHanson(1.0)
        r, h = 2.0, 1e-5
        slope = (form.arclength(r + h) - form.arclength(r - h)) / (2 * h)
        assert slope == pytest.approx(form.evaluate(r).speed, rel=1e-8)

    def test_arclength_starts_at_zero(self):
        assert EguchiHanson(1.0).arclength(1.0 + 1e-12) == pytest.approx(0.0, abs=1e-5)

    def test_arclength_inverse(self):
        form = EguchiHanson(2.0)
        t = form.arclength(5.0)
        assert form.coord_at_arclength(t) == pytest.approx(5.0, rel=1e-10)


class TestFubiniStudy:
    def test_ricci_at_quarter_period(self):
        form = FubiniStudy(1.0)
        a1, a2 = form.at_arclength(math.pi / 4)
        assert (a1, a2) == pytest.approx((0.5, math.sqrt(2) / 2))
        ric = ricci_from_jet(to_arclength_jet(form, math.pi / 4))
        assert (ric.ric00, ric.ric11, ric.ric22) == pytest.approx((12.0, 12.0, 12.0))

    def test_domain_ends_at_the_bolt(self):
        form = FubiniStudy(2.0)
        assert form.domain == pytest.approx((0.0, math.pi / 4))
        assert form.sample_window == pytest.approx((0.01 * math.pi / 4, 0.99 * math.pi / 4))
        with pytest.raises(DomainError):
            form.evaluate(math.pi / 4)

    def test_a1_negative_past_the_bolt(self):
        jet = FubiniStudy(1.0)._jet(0.6 * math.pi)
        assert jet.a1 < 0 < jet.a2
        with pytest.raises(InvalidJetError):
            jet.to_arclength()

    def test_sample_table_stays_inside_the_domain(self):
        form = FubiniStudy(1.0)
        table = sample_table(form, points=100)
        assert table["coord"].min() > 0
        assert table["coord"].max() < math.pi / 2
        assert (table["A1"] > 0).all()

    def test_solves_einstein_family(self):
        assert FubiniStudy.params == FUBINI_STUDY
        assert FubiniStudyHyperbolic.params == FUBINI_STUDY


class TestCase3:
    def test_metric_coefficients(self):
        assert case3_metric_coeffs(1.0, 0.5) == pytest.approx((16 / 81, 4.0, 4 / 9))
        with pytest.raises(DomainError):
            case3_metric_coeffs(1.0, 1.0)

    def test_values_at_half(self):
        jet = Case3(1.0).evaluate(0.5)
        assert (jet.a1, jet.a2, jet.speed) == pytest.approx((2.0, 2 / 3, 4 / 9))

    def test_t_of_rho_derivative(self):
        h = 1e-6
        for rho in [0.05, 0.5, 0.8]:
            slope = (case3_t_of_rho(1.0, rho + h) - case3_t_of_rho(1.0, rho - h)) / (2 * h)
            assert slope == pytest.approx(rho**2 / (1 - rho**2) ** 2, rel=1e-6)

    @pytest.mark.parametrize("c", [1.0, 2.5])
    @pytest.mark.parametrize("u", [0.02, 0.09, 0.3, 0.5, 0.9])
    def test_t_of_rho_matches_quadrature(self, c, u):
        rho = u * c
        expected, _ = integrate.quad(
            lambda r: r**2 / (c**2 - r**2) ** 2, 0.0, rho, epsabs=0.0, epsrel=1e-13
        )
        assert case3_t_of_rho(c, rho) == pytest.approx(expected, rel=1e-10)

    def test_series_branch_is_continuous(self):
        below = case3_t_of_rho(2.0, 0.2 * (1 - 1e-12))
        above = case3_t_of_rho(2.0, 0.2 * (1 + 1e-12))
        assert below == pytest.approx(above, rel=1e-9)

    def test_t_starts_at_zero(self):
        assert 0 < case3_t_of_rho(1.0, 1e-3) < 1e-9

    @pytest.mark.parametrize("rho", [1e-4, 0.01, 0.5, 0.99])
    def test_inverse(self, rho):
        t = case3_t_of_rho(1.0, rho)
        assert case3_rho_of_t(1.0, t) == pytest.approx(rho, rel=1e-10)

    def test_state_seeds_the_integrator(self):
        t, a1, a2 = Case3(1.0).state(0.5)
        assert t == pytest.approx((2 / 3 - math.atanh(0.5)) / 2)
        assert (a1, a2) == pytest.approx((2.0, 2 / 3))


class TestFlatCone:
    def test_jet(self):
        jet = to_arclength_jet(FlatCone(), 5.0)
        assert jet.as_tuple() == pytest.approx((5.0, 1.0, 0.0, 5.0, 1.0, 0.0))

    def test_at_arclength(self):
        assert FlatCone().at_arclength(3.0) == (3.0, 3.0)


class TestSampleTable:
    def test_columns_and_rows(self):
        table = sample_table(make_form("case3"), points=12)
        assert list(table.columns) == CATALOG_COLUMNS
        assert len(table) == 12
        assert table["t"].is_monotonic_increasing

    def test_too_few_points(self):
        with pytest.raises(InvalidParamsError):
            sample_table(make_form("case3"), points=1)
