"""Tests for the regime constants, growth laws and the closed-form flow time."""

import math

import numpy as np
import pytest

from ripening.errors import DomainError
from ripening.numerics import integrate, solve_ode
from ripening.regime import (
    ATTACHMENT_LIMITED,
    DIFFUSION_LIMITED,
    REGIMES,
    Regime,
    ScaledState,
    coarsening_slope,
    critical_radius,
    evolve_scaled,
    flow_time,
    get_regime,
    growth_rate_physical,
    growth_rate_scaled,
    return_invariant,
    scaled_trajectory,
)

BOTH = (DIFFUSION_LIMITED, ATTACHMENT_LIMITED)


class TestRegimeConstants:
    def test_dl_tuple(self):
        r = DIFFUSION_LIMITED
        assert (r.growth_exponent, r.rate_constant, r.coarsening_exponent,
                r.z_max) == (2, 27.0 / 4.0, 3, 1.5)

    def test_al_tuple(self):
        r = ATTACHMENT_LIMITED
        assert (r.growth_exponent, r.rate_constant, r.coarsening_exponent,
                r.z_max) == (1, 4.0, 2, 2.0)

    def test_lookup(self):
        assert get_regime("dl") is DIFFUSION_LIMITED
        assert get_regime("al") is ATTACHMENT_LIMITED
        assert set(REGIMES) == {"dl", "al"}
        with pytest.raises(DomainError):
            get_regime("xx")

    def test_no_mix_and_match(self):
        # The constants come as a package; no other tuple is constructible.
        with pytest.raises(DomainError):
            Regime("dl", 1, 4.0, 2, 2.0)
        with pytest.raises(DomainError):
            Regime("al", 1, 4.0, 2, 1.5)
        with pytest.raises(DomainError):
            Regime("other", 2, 27.0 / 4.0, 3, 1.5)

    def test_slope(self):
        assert coarsening_slope(DIFFUSION_LIMITED) == pytest.approx(4.0 / 9.0)
        assert coarsening_slope(ATTACHMENT_LIMITED) == pytest.approx(0.5)


class TestGrowthRates:
    @pytest.mark.parametrize("regime", BOTH)
    def test_fixed_points(self, regime):
        assert growth_rate_scaled(regime, 1.0) == pytest.approx(-1.0, abs=1e-15)
        assert growth_rate_scaled(regime, regime.z_max) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("regime", BOTH)
    def test_always_negative_inside(self, regime):
        # Every rescaled size below the cutoff drifts down.
        for z in np.linspace(0.01, regime.z_max - 0.01, 150):
            assert growth_rate_scaled(regime, z) < 0.0

    def test_scaled_domain(self):
        with pytest.raises(DomainError):
            growth_rate_scaled(DIFFUSION_LIMITED, 0.0)
        with pytest.raises(DomainError):
            growth_rate_scaled(ATTACHMENT_LIMITED, -0.5)

    def test_physical_values(self):
        # At R = R_c a particle is stationary in both regimes.
        assert growth_rate_physical(DIFFUSION_LIMITED, 2.0, 2.0) == 0.0
        assert growth_rate_physical(ATTACHMENT_LIMITED, 2.0, 2.0) == 0.0
        # dl: (R/R_c - 1)/R^2 ; al: (R/R_c - 1)/R
        assert growth_rate_physical(DIFFUSION_LIMITED, 2.0, 1.0) == pytest.approx(0.25)
        assert growth_rate_physical(ATTACHMENT_LIMITED, 2.0, 1.0) == pytest.approx(0.5)

    def test_physical_domain(self):
        with pytest.raises(DomainError):
            growth_rate_physical(DIFFUSION_LIMITED, 0.0, 1.0)
        with pytest.raises(DomainError):
            growth_rate_physical(DIFFUSION_LIMITED, 1.0, 0.0)


class TestCriticalRadius:
    def test_known_values(self):
        assert critical_radius(DIFFUSION_LIMITED, 1.0, 0.0) == 1.0
        assert critical_radius(ATTACHMENT_LIMITED, 1.0, 6.0) == pytest.approx(2.0)
        # late-stage baseline: R_c**gamma = (gamma/nu) t from zero
        assert critical_radius(DIFFUSION_LIMITED, 0.0, 9.0) == pytest.approx(
            4.0 ** (1.0 / 3.0)
        )

    @pytest.mark.parametrize("regime", BOTH)
    def test_rate_constant_recovered(self, regime):
        # nu = 1/(R_c**(lam) * ... ) reduces to 1/(R_c^{gamma-1} dR_c/dt);
        # recover it by finite differences of the closed form.
        t, h = 7.0, 1e-6
        rc = critical_radius(regime, 1.0, t)
        drc = (critical_radius(regime, 1.0, t + h)
               - critical_radius(regime, 1.0, t - h)) / (2.0 * h)
        nu = 1.0 / (rc ** (regime.coarsening_exponent - 1) * drc)
        assert nu == pytest.approx(regime.rate_constant, rel=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            critical_radius(DIFFUSION_LIMITED, -1.0, 1.0)
        with pytest.raises(DomainError):
            critical_radius(DIFFUSION_LIMITED, 1.0, -1.0)


# Pinned by a 40-digit evaluation of the closed forms.
FLOW_TIME_DL_AT_1 = -1.6161308271643958  # = -1 - (8/9) ln 2
FLOW_TIME_DL_AT_1_25 = -2.2579933365495084
INVARIANT_DL_AT_1_25 = -2.0348497852352986


class TestFlowTime:
    def test_pinned_values(self):
        assert flow_time(DIFFUSION_LIMITED, 1.0) == pytest.approx(
            FLOW_TIME_DL_AT_1, abs=1e-14
        )
        assert flow_time(DIFFUSION_LIMITED, 1.0) == pytest.approx(
            -1.0 - (8.0 / 9.0) * math.log(2.0), abs=1e-14
        )
        assert flow_time(ATTACHMENT_LIMITED, 1.0) == pytest.approx(-2.0, abs=1e-14)
        assert flow_time(DIFFUSION_LIMITED, 1.25) == pytest.approx(
            FLOW_TIME_DL_AT_1_25, abs=1e-14
        )

    @pytest.mark.parametrize("regime", BOTH)
    def test_strictly_decreasing(self, regime):
        zs = np.linspace(1e-3, regime.z_max - 1e-3, 300)
        taus = [flow_time(regime, z) for z in zs]
        assert np.all(np.diff(taus) < 0.0)

    @pytest.mark.parametrize("regime", BOTH)
    def test_derivative_identity(self, regime):
        # d(flow_time)/dz must invert the flow: FD slope * dz/dtau = 1.
        h = 1e-6
        for z in np.linspace(0.05, regime.z_max - 0.05, 60):
            slope = (flow_time(regime, z + h) - flow_time(regime, z - h)) / (2.0 * h)
            assert slope * growth_rate_scaled(regime, z) == pytest.approx(
                1.0, rel=1e-6
            )

    @pytest.mark.parametrize("regime", BOTH)
    def test_matches_quadrature_of_inverse_rate(self, regime):
        # Independent route: integrate 1/(dz/dtau) with the rate written out
        # inline, not taken from the module under test.
        nu, lam = regime.rate_constant, regime.growth_exponent
        rate = lambda z: nu * (z - 1.0) / z**lam - z
        got = flow_time(regime, 1.2) - flow_time(regime, 0.5)
        want = integrate(lambda z: 1.0 / rate(z), 0.5, 1.2)
        assert got == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("regime", BOTH)
    def test_domain_edges(self, regime):
        with pytest.raises(DomainError):
            flow_time(regime, 0.0)
        with pytest.raises(DomainError):
            flow_time(regime, regime.z_max)
        with pytest.raises(DomainError):
            flow_time(regime, regime.z_max - 1e-13)  # inside the guard band


class TestReturnInvariant:
    def test_pinned_value(self):
        assert return_invariant(DIFFUSION_LIMITED, 1.25) == pytest.approx(
            INVARIANT_DL_AT_1_25, abs=1e-14
        )

    @pytest.mark.parametrize("regime", BOTH)
    def test_unique_maximum_at_one(self, regime):
        zs = np.linspace(0.05, regime.z_max - 0.01, 400)
        vals = np.array([return_invariant(regime, z) for z in zs])
        peak = return_invariant(regime, 1.0)
        assert np.all(vals[np.abs(zs - 1.0) > 1e-12] < peak)
        # flat top: derivative vanishes at z = 1
        h = 1e-6
        slope = (return_invariant(regime, 1.0 + h)
                 - return_invariant(regime, 1.0 - h)) / (2.0 * h)
        assert slope == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("regime", BOTH)
    def test_curvature_at_peak_is_minus_nu(self, regime):
        h = 1e-4
        second = (
            return_invariant(regime, 1.0 + h)
            - 2.0 * return_invariant(regime, 1.0)
            + return_invariant(regime, 1.0 - h)
        ) / h**2
        assert second == pytest.approx(-regime.rate_constant, rel=1e-5)


class TestEvolveScaled:
    @pytest.mark.parametrize("regime", BOTH)
    def test_zero_offset_is_identity(self, regime):
        assert evolve_scaled(regime, 1.2, 0.0) == 1.2

    @pytest.mark.parametrize("regime", BOTH)
    def test_matches_ode_integration(self, regime):
        f = lambda tau, z: growth_rate_scaled(regime, z)
        for z0, dt in ((1.25, 0.5), (0.8, 0.04), (1.4, 0.8)):
            want = solve_ode(f, z0, 0.0, dt)
            assert evolve_scaled(regime, z0, dt) == pytest.approx(want, abs=1e-6)

    @pytest.mark.parametrize("regime", BOTH)
    def test_monotone_in_offset(self, regime):
        zs = [evolve_scaled(regime, 1.3, d) for d in (0.0, 0.2, 0.4, 0.8)]
        assert all(b < a for a, b in zip(zs, zs[1:]))

    def test_dissolution_detected(self):
        # A sub-critical size reaches zero in finite flow time.
        with pytest.raises(DomainError):
            evolve_scaled(DIFFUSION_LIMITED, 0.5, 0.05)
        with pytest.raises(DomainError):
            evolve_scaled(ATTACHMENT_LIMITED, 1.25, 5.0)

    def test_trajectory_helper(self):
        states = scaled_trajectory(DIFFUSION_LIMITED, 1.3, [0.0, 0.1, 0.2])
        assert [s.tau for s in states] == [0.0, 0.1, 0.2]
        assert states[0].z == 1.3
        assert states[0].z > states[1].z > states[2].z
        with pytest.raises(DomainError):
            scaled_trajectory(DIFFUSION_LIMITED, 1.3, [0.2, 0.1])


class TestScaledState:
    def test_validation(self):
        ScaledState(1.0, -2.0)
        with pytest.raises(DomainError):
            ScaledState(0.0, 0.0)
        with pytest.raises(DomainError):
            ScaledState(1.0, math.inf)
