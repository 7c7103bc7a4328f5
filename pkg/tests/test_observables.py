"""
Tests for the closed-form photon number, logarithmic negativity and
occurrence time, checked against direct integration where they are exact.
"""

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ringlight.core.exceptions import DomainError, HorizonError
from ringlight.services.dynamics import MixedFrameMoments, block_propagator, integrate_moments
from ringlight.services.gaussian import (
    BathParams, logneg_energy_bound, symplectic_eigenvalues_from_invariants, thermal_state,
)
from ringlight.services.modulation import (
    SampledModulation, SinusoidalModulation, resonant_rectangular,
)
from ringlight.services.observables import (
    REGULAR, THRESHOLD, ClosedFormParams, RectangularShape, SinusoidalShape,
    closed_form_params_for, eta, f_factor, logneg_closed, logneg_closed_at,
    occurrence_time, photon_number_asymptotic, photon_number_closed,
    photon_number_closed_at, scenario_occupation, scenario_ratio,
)
LN2 = np.log(2.0)
SIN_NU = np.pi / 400


def _rectangular(gamma=0.0, nbar=0.0, f_r=2.0):
    profile = resonant_rectangular(f_r, 1.0)
    return ClosedFormParams(nu=abs(np.log(f_r)), gamma=gamma, nbar=nbar, T=1.0,
                            shape=RectangularShape(t1=profile.t1, t2=profile.t2, f_r=f_r))


class TestInputs:
    def test_eta(self):
        assert eta(0.0, 0.1) == pytest.approx((0.2, -0.2))
        assert eta(0.05, SIN_NU) == pytest.approx((0.115708, 0.084292), abs=1e-6)

    @pytest.mark.parametrize("kwargs", [
        {"nu": 0.0},
        {"T": 0.0},
        {"gamma": -0.1},
        {"nbar": -1.0},
    ])
    def test_validation(self, sin_params, kwargs):
        with pytest.raises(DomainError):
            replace(sin_params, **kwargs)

    def test_rectangular_durations_must_fill_period(self):
        with pytest.raises(DomainError):
            ClosedFormParams(nu=LN2, gamma=0.0, nbar=0.0, T=1.0,
                             shape=RectangularShape(t1=0.5, t2=0.4, f_r=2.0))

    def test_rho(self):
        assert RectangularShape(t1=0.5, t2=0.5, f_r=0.25).rho == 4.0


class TestShapeFactors:
    @pytest.mark.parametrize("params", [
        ClosedFormParams(nu=SIN_NU, gamma=0.0, nbar=1.0, T=1.0, shape=SinusoidalShape()),
        _rectangular(gamma=0.0, nbar=1.0),
    ])
    def test_vanish_without_bath(self, params):
        factors = f_factor(params)
        assert factors.plus == pytest.approx(0.0, abs=1e-15)
        assert factors.minus == pytest.approx(0.0, abs=1e-15)
        assert factors.branch == REGULAR

    def test_sinusoidal_values(self, sin_params):
        eta_plus, eta_minus = eta(0.05, SIN_NU)
        plus = 0.1 / eta_minus * (1 - np.exp(eta_minus)) / (1 - np.exp(eta_plus))
        minus = 0.1 / eta_plus * (1 - np.exp(eta_plus)) / (1 - np.exp(eta_minus))
        factors = f_factor(sin_params)
        assert factors.plus == pytest.approx(plus, rel=1e-12)
        assert factors.minus == pytest.approx(minus, rel=1e-12)
        assert 0 < factors.plus < 1

    def test_threshold_branch(self, sin_params):
        factors = f_factor(replace(sin_params, gamma=SIN_NU))
        assert factors.branch == THRESHOLD
        assert np.isinf(factors.minus)
        assert np.isfinite(factors.plus)


class TestPhotonNumber:
    def test_initial_value(self, sin_params):
        assert photon_number_closed(sin_params, 0) == pytest.approx(3.0, rel=1e-15)

    @pytest.mark.parametrize("nbar", [0.0, 1.0, 2.5])
    def test_closed_system(self, sin_params, nbar):
        params = replace(sin_params, gamma=0.0, nbar=nbar)
        t = np.arange(0, 200, 10.0)
        assert_allclose(photon_number_closed_at(params, t),
                        (2 * nbar + 1) * np.cosh(2 * SIN_NU * t), rtol=1e-12)

    @pytest.mark.parametrize("params", [
        ClosedFormParams(nu=SIN_NU, gamma=0.0, nbar=1.0, T=1.0, shape=SinusoidalShape()),
        _rectangular(gamma=0.0, nbar=1.0, f_r=1.01),
    ])
    def test_continuous_in_gamma(self, params):
        tiny = replace(params, gamma=1e-9)
        for n in (1, 10, 100):
            assert photon_number_closed(tiny, n) == pytest.approx(
                photon_number_closed(params, n), rel=1e-6)

    def test_continuous_through_threshold(self, sin_params):
        at = replace(sin_params, gamma=SIN_NU)
        near = replace(sin_params, gamma=SIN_NU * (1 + 1e-6))
        for n in (1, 100, 1000):
            assert photon_number_closed(at, n) == pytest.approx(
                photon_number_closed(near, n), rel=1e-4)
        assert np.isfinite(photon_number_asymptotic(at, 1000.0))

    def test_asymptotic_form(self, sin_params):
        t = 20.0 / SIN_NU
        assert photon_number_asymptotic(sin_params, t) / photon_number_closed_at(
            sin_params, t) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("gamma", [0.0, 0.02, 0.05, 0.1])
    def test_log_slope_tends_to_twice_nu(self, sin_params, gamma):
        params = replace(sin_params, gamma=gamma)
        t = np.linspace(1800.0, 2000.0, 21)
        slope = np.polyfit(t, np.log(photon_number_closed_at(params, t)), 1)[0]
        assert slope == pytest.approx(2 * SIN_NU, rel=0.01)

    def test_rectangular_log_slope(self):
        params = _rectangular(gamma=0.05, nbar=1.0, f_r=1.01)
        t = np.arange(1800.0, 2001.0, 10.0)
        slope = np.polyfit(t, np.log(photon_number_closed_at(params, t)), 1)[0]
        assert slope == pytest.approx(2 * np.log(1.01), rel=0.01)

    def test_invalid_times(self, sin_params):
        with pytest.raises(DomainError):
            photon_number_closed(sin_params, 1.5)
        with pytest.raises(DomainError):
            photon_number_closed(sin_params, -1)
        with pytest.raises(DomainError):
            photon_number_closed_at(sin_params, -0.5)


class TestLogNegativity:
    @pytest.mark.parametrize("nbar", [0.0, 1.0])
    def test_closed_system(self, sin_params, nbar):
        params = replace(sin_params, gamma=0.0, nbar=nbar)
        t = np.arange(0, 400, 25.0)
        expected = np.maximum(2 * SIN_NU * t / LN2 - np.log2(2 * nbar + 1), 0.0)
        assert_allclose(logneg_closed_at(params, t), expected, atol=1e-12)

    def test_starts_at_zero(self, sin_params):
        assert logneg_closed(sin_params, 0) == 0.0
        assert logneg_closed(replace(sin_params, nbar=0.0), 0) == 0.0

    def test_bath_reduces_entanglement(self, sin_params):
        free = logneg_closed(replace(sin_params, gamma=0.0), 1000)
        damped = logneg_closed(sin_params, 1000)
        assert 0 < damped < free

    @pytest.mark.property
    @settings(max_examples=40, deadline=None)
    @given(gamma=st.floats(0.0, 0.5), nbar=st.floats(0.0, 3.0), n=st.integers(0, 8))
    def test_rectangular_respects_energy_bound(self, gamma, nbar, n):
        params = _rectangular(gamma=gamma, nbar=nbar)
        n_total = max(photon_number_closed(params, n) - 1.0, 0.0)
        assert logneg_closed(params, n) <= logneg_energy_bound(n_total) + 1e-9


GRID_GAMMAS = [0.0, 0.02, 0.05]
GRID_NBARS = [0.0, 1.0, 3.0]
STROBE = np.array([0, 1, 2, 5, 10, 100, 500, 1000, 1500, 2000])


def _iterated_period_maps(profile, bath, periods):
    """
    <N+1> and E_N at t = n T from the one-period maps of both blocks.

    The damped block follows P -> e^{-2 gamma T} U+ P U+^T + W, where W is
    read off one integrated period; the other block follows Q -> U- Q U-^T.
    """
    T = profile.period
    state0 = thermal_state(bath.nbar)
    start = MixedFrameMoments.from_state(state0)
    U_plus = np.exp(-bath.gamma * T) * block_propagator(profile, "+", T)
    U_minus = block_propagator(profile, "-", T)
    noise = np.zeros((2, 2))
    if bath.gamma > 0:
        one = integrate_moments(state0, profile, bath, T, times=[0.0, T])
        after = MixedFrameMoments.from_state(one.final_state())
        noise = after.plus - U_plus @ start.plus @ U_plus.T
    P, Q = start.plus.copy(), start.minus.copy()
    n_totals, lognegs = [], []
    for k in range(int(periods.max()) + 1):
        if k in periods:
            # det P is only well conditioned while the damped block stays bounded.
            det_plus = np.linalg.det(P) if bath.gamma > 0 else start.det_plus
            delta = P[0, 0] * Q[1, 1] + P[1, 1] * Q[0, 0] - 2 * P[0, 1] * Q[0, 1]
            small, _ = symplectic_eigenvalues_from_invariants(delta, det_plus * start.det_minus)
            n_totals.append(0.5 * (np.trace(P) + np.trace(Q)))
            lognegs.append(max(0.0, -np.log2(2 * small)))
        P = U_plus @ P @ U_plus.T + noise
        Q = U_minus @ Q @ U_minus.T
    return np.array(n_totals), np.array(lognegs)


class TestAgainstIntegration:
    @pytest.mark.parametrize("gamma", GRID_GAMMAS)
    @pytest.mark.parametrize("nbar", GRID_NBARS)
    def test_rectangular_is_exact_at_whole_periods(self, meissner, gamma, nbar):
        bath = BathParams(gamma=gamma, nbar=nbar)
        params = closed_form_params_for(meissner, bath)
        n = np.arange(9)
        result = integrate_moments(thermal_state(nbar), meissner, bath, 8.0, times=n * 1.0)
        closed_n = [photon_number_closed(params, k) for k in n]
        closed_e = [logneg_closed(params, k) for k in n]
        assert_allclose(result.photon_number + 1, closed_n, rtol=1e-6)
        assert_allclose(result.log_negativity, closed_e, atol=1e-6)

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma", GRID_GAMMAS)
    @pytest.mark.parametrize("nbar", GRID_NBARS)
    def test_rectangular_long_horizon(self, weak_meissner, gamma, nbar):
        bath = BathParams(gamma=gamma, nbar=nbar)
        params = closed_form_params_for(weak_meissner, bath)
        result = integrate_moments(thermal_state(nbar), weak_meissner, bath, 2000.0,
                                   times=STROBE * 1.0)
        closed_n = [photon_number_closed(params, k) for k in STROBE]
        closed_e = [logneg_closed(params, k) for k in STROBE]
        assert_allclose(result.photon_number + 1, closed_n, rtol=1e-4)
        assert_allclose(result.log_negativity, closed_e, rtol=1e-4, atol=1e-6)
        assert result.log_negativity[-1] > 15.0

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma", GRID_GAMMAS)
    @pytest.mark.parametrize("nbar", GRID_NBARS)
    def test_sinusoidal_follows_period_maps(self, mathieu, gamma, nbar):
        bath = BathParams(gamma=gamma, nbar=nbar)
        result = integrate_moments(thermal_state(nbar), mathieu, bath, 2000.0,
                                   times=STROBE * 1.0)
        n_plus_one, lognegs = _iterated_period_maps(mathieu, bath, STROBE)
        assert_allclose(result.photon_number + 1, n_plus_one, rtol=1e-4)
        assert_allclose(result.log_negativity, lognegs, rtol=1e-4, atol=1e-6)

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma, rtol, atol", [
        (0.0, 1e-3, 1e-2),
        (0.02, 1e-2, 3e-2),
        (0.05, 1e-2, 3e-2),
    ])
    def test_sinusoidal_within_first_order_tolerance(self, mathieu, gamma, rtol, atol):
        # The sinusoidal shape factors hold to first order in nu T; with a bath
        # that leaves offsets of order 1e-2 in the F terms of <N+1> and in E_N.
        bath = BathParams(gamma=gamma, nbar=1.0)
        params = closed_form_params_for(mathieu, bath)
        result = integrate_moments(thermal_state(1.0), mathieu, bath, 2000.0,
                                   times=STROBE * 1.0)
        assert_allclose(result.photon_number + 1,
                        [photon_number_closed(params, k) for k in STROBE], rtol=rtol)
        assert_allclose(result.log_negativity,
                        [logneg_closed(params, k) for k in STROBE], atol=atol)

    @pytest.mark.slow
    @pytest.mark.parametrize("profile_name", ["weak_meissner", "mathieu"])
    @pytest.mark.parametrize("gamma", GRID_GAMMAS)
    def test_integrated_log_slope_is_twice_nu(self, request, profile_name, gamma):
        profile = request.getfixturevalue(profile_name)
        bath = BathParams(gamma=gamma, nbar=1.0)
        nu = closed_form_params_for(profile, bath).nu
        result = integrate_moments(thermal_state(1.0), profile, bath, 2000.0,
                                   times=[0.0, 1500.0, 2000.0])
        slope = np.log(result.photon_number[2] / result.photon_number[1]) / 500.0
        assert slope == pytest.approx(2 * nu, rel=1e-4)


class TestOccurrenceTime:
    def test_closed_system(self, sin_params):
        params = replace(sin_params, gamma=0.0, nbar=1.0)
        assert occurrence_time(params) == pytest.approx(np.log(3.0) / (2 * SIN_NU), rel=1e-9)

    def test_vacuum_bath_entangles_immediately(self, sin_params):
        assert occurrence_time(replace(sin_params, gamma=0.0, nbar=0.0)) == 0.0
        assert occurrence_time(replace(sin_params, nbar=0.0)) == 0.0

    def test_bath_delays_entanglement(self, sin_params):
        free = occurrence_time(replace(sin_params, gamma=0.0))
        assert occurrence_time(replace(sin_params, gamma=0.005)) > free

    def test_monotone_in_temperature_and_coupling(self, sin_params):
        nbars = np.linspace(0.0, 5.0, 11)
        gammas = np.linspace(0.0, 0.9, 10) * SIN_NU
        times = np.array([[occurrence_time(replace(sin_params, gamma=g, nbar=nb))
                           for g in gammas] for nb in nbars])
        slack = 1e-7
        assert np.all(np.diff(times, axis=0) >= -slack)
        assert np.all(np.diff(times, axis=1) >= -slack)

    def test_horizon(self, sin_params):
        with pytest.raises(HorizonError):
            occurrence_time(replace(sin_params, nbar=5.0), horizon_periods=1.0)


class TestScenario:
    def test_ratio_scale(self):
        radius, index = 1e-6, 1.5
        ratio = scenario_ratio(radius, index)
        assert 1e5 <= ratio / (radius * index) <= 1e7
        assert scenario_ratio(radius, index, temperature=586.0) == pytest.approx(2 * ratio)

    def test_nanoscale_ring_is_cold(self):
        assert scenario_occupation(1e-9, 0.1) == pytest.approx(0.0, abs=1e-300)

    def test_invalid(self):
        with pytest.raises(DomainError):
            scenario_ratio(0.0, 1.5)


class TestParamsFromProfile:
    def test_rectangular(self, meissner, warm_bath):
        params = closed_form_params_for(meissner, warm_bath)
        assert params.nu == pytest.approx(LN2, rel=1e-12)
        assert params.shape == RectangularShape(t1=meissner.t1, t2=meissner.t2, f_r=2.0)
        assert (params.gamma, params.nbar) == (0.05, 1.0)
        assert params.T == pytest.approx(1.0)

    def test_sinusoidal(self, mathieu, warm_bath):
        params = closed_form_params_for(mathieu, warm_bath)
        assert params.nu == pytest.approx(SIN_NU, rel=0.05)
        assert isinstance(params.shape, SinusoidalShape)

    def test_stable_profile(self, warm_bath):
        with pytest.raises(DomainError):
            closed_form_params_for(SinusoidalModulation(f0=np.pi, h=0.0, omega=2 * np.pi),
                                   warm_bath)

    def test_sampled_profile(self, warm_bath):
        profile = SampledModulation.from_function(
            lambda t: np.pi * (1 + 0.05 * np.sin(2 * np.pi * t)), 1.0)
        with pytest.raises(DomainError):
            closed_form_params_for(profile, warm_bath)
