"""Coarsening regimes and single-particle growth laws.

Late-stage ripening of a dilute particle population comes in two limiting
kinetics.  When growth is limited by solute diffusion ("dl") a particle of
radius R obeys

    dR/dt = (1/R^2) (R/R_c - 1),

and when it is limited by interface attachment ("al")

    dR/dt = (1/R)   (R/R_c - 1),

where R_c is the critical radius separating shrinking from growing
particles.  In the scaling state R_c itself coarsens so that a power of it
grows linearly in time, R_c(t)^gamma = R_c(0)^gamma + (gamma/nu) t, with
(gamma, nu) = (3, 27/4) for dl and (2, 4) for al.

In rescaled variables z = R/R_c and tau = gamma * ln(R_c/R_c(t0)) both laws
collapse onto the autonomous flow

    dz/dtau = nu (z - 1) / z**lam - z,      lam = 2 (dl) or 1 (al),

whose right-hand side factors with a double root at z_max = 3/2 (dl) or
2 (al): every trajectory started below z_max drifts down to z = 0 in finite
"time" tau.  The flow separates, and the antiderivative tau(z) of
1/(dz/dtau) has the closed forms implemented here; alpha(z) = ln z + tau(z)
is the combination that is conserved between a radius and its later return
to the same physical size (see return_map).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import Tolerance, find_root

__all__ = [
    "Regime",
    "DIFFUSION_LIMITED",
    "ATTACHMENT_LIMITED",
    "REGIMES",
    "get_regime",
    "ScaledState",
    "growth_rate_scaled",
    "growth_rate_physical",
    "critical_radius",
    "coarsening_slope",
    "flow_time",
    "return_invariant",
    "evolve_scaled",
    "scaled_trajectory",
]

# tau(z) diverges at the distribution cutoff z_max; stay this far below it.
CUTOFF_GUARD = 1e-12

_EXPECTED = {
    "dl": (2, 27.0 / 4.0, 3, 1.5),
    "al": (1, 4.0, 2, 2.0),
}


@dataclass(frozen=True)
class Regime:
    """One of the two coarsening kinetics, with its fixed constants.

    The four numbers are not independent knobs: for each ``kind`` only the
    single tuple realised by the physics is accepted, so a ``Regime`` cannot
    be constructed in a mix-and-match state.

    Attributes
    ----------
    kind:
        ``"dl"`` (diffusion limited) or ``"al"`` (attachment limited).
    growth_exponent:
        Power of z dividing ``nu (z - 1)`` in the rescaled flow (2 or 1).
    rate_constant:
        nu, the late-stage rate constant (27/4 or 4).
    coarsening_exponent:
        gamma: ``R_c**gamma`` grows linearly in time (3 or 2).
    z_max:
        Upper cutoff of the scaled size distribution (3/2 or 2).
    """

    kind: str
    growth_exponent: int
    rate_constant: float
    coarsening_exponent: int
    z_max: float

    def __post_init__(self):
        expected = _EXPECTED.get(self.kind)
        if expected is None:
            raise DomainError(f"unknown regime kind {self.kind!r} (use 'dl' or 'al')")
        got = (
            self.growth_exponent,
            self.rate_constant,
            self.coarsening_exponent,
            self.z_max,
        )
        if got != expected:
            raise DomainError(
                f"constants {got!r} are inconsistent with regime {self.kind!r}; "
                f"expected {expected!r}"
            )


DIFFUSION_LIMITED = Regime("dl", 2, 27.0 / 4.0, 3, 1.5)
ATTACHMENT_LIMITED = Regime("al", 1, 4.0, 2, 2.0)
REGIMES = {"dl": DIFFUSION_LIMITED, "al": ATTACHMENT_LIMITED}


def get_regime(kind: str) -> Regime:
    """Look up a regime singleton by its ``kind`` string."""
    try:
        return REGIMES[kind]
    except KeyError:
        raise DomainError(
            f"unknown regime kind {kind!r} (use 'dl' or 'al')"
        ) from None


@dataclass(frozen=True)
class ScaledState:
    """A point (z, tau) on a rescaled trajectory."""

    z: float
    tau: float

    def __post_init__(self):
        if not (self.z > 0.0 and math.isfinite(self.z)):
            raise DomainError(f"scaled size must be positive and finite, got {self.z!r}")
        if not math.isfinite(self.tau):
            raise DomainError(f"tau must be finite, got {self.tau!r}")


def growth_rate_scaled(regime: Regime, z: float) -> float:
    """Right-hand side ``nu (z - 1)/z**lam - z`` of the rescaled flow.

    Negative for every z in (0, z_max) except the double root at z_max
    itself, which is why all rescaled sizes eventually shrink.
    """
    z = float(z)
    if not (z > 0.0 and math.isfinite(z)):
        raise DomainError(f"scaled size must be positive and finite, got {z!r}")
    return regime.rate_constant * (z - 1.0) / z**regime.growth_exponent - z


def growth_rate_physical(regime: Regime, radius: float, r_c: float) -> float:
    """Unscaled growth law dR/dt for a particle of ``radius`` at critical
    radius ``r_c`` (both in the units where the rate constants above hold)."""
    radius = float(radius)
    r_c = float(r_c)
    if not (radius > 0.0 and math.isfinite(radius)):
        raise DomainError(f"radius must be positive and finite, got {radius!r}")
    if not (r_c > 0.0 and math.isfinite(r_c)):
        raise DomainError(f"critical radius must be positive and finite, got {r_c!r}")
    return (radius / r_c - 1.0) / radius**(regime.growth_exponent)


def coarsening_slope(regime: Regime) -> float:
    """Rate ``d(R_c**gamma)/dt = gamma/nu`` (4/9 for dl, 1/2 for al)."""
    return regime.coarsening_exponent / regime.rate_constant


def critical_radius(regime: Regime, r_c0: float, t: float) -> float:
    """Critical radius at time ``t`` given its value ``r_c0`` at ``t = 0``.

    ``R_c(t) = (r_c0**gamma + (gamma/nu) t)**(1/gamma)``.  ``r_c0 = 0`` is
    accepted: it selects the pure late-stage baseline ``R_c**gamma =
    (gamma/nu) t``, which is the natural clock for everything downstream.
    """
    r_c0 = float(r_c0)
    t = float(t)
    if not (r_c0 >= 0.0 and math.isfinite(r_c0)):
        raise DomainError(f"initial critical radius must be >= 0, got {r_c0!r}")
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"time must be >= 0, got {t!r}")
    gamma = regime.coarsening_exponent
    return (r_c0**gamma + coarsening_slope(regime) * t) ** (1.0 / gamma)


def _tau_closed_form(regime: Regime, z: float) -> float:
    # Antiderivative of 1/(dz/dtau); valid on [0, z_max), finite at z = 0.
    if regime.kind == "dl":
        # dz/dtau = -(2z - 3)^2 (z + 3) / (4 z^2); partial fractions give
        # coefficients (-10/9, -2, -4/9) on 1/(3-2z), 1/(3-2z)^2, 1/(z+3).
        return (
            1.0 / (2.0 * z - 3.0)
            - (5.0 / 9.0) * math.log(3.0 - 2.0 * z)
            - (4.0 / 9.0) * math.log(z + 3.0)
        )
    # al: dz/dtau = -(z - 2)^2 / z.
    return 2.0 / (z - 2.0) - math.log(2.0 - z)


def flow_time(regime: Regime, z: float) -> float:
    """Closed-form rescaled time tau(z) at which a trajectory passes ``z``.

    tau is strictly decreasing on (0, z_max), diverges to -inf at the cutoff
    and stays finite (tau(0) = -1/3 - ln 3 for dl, -1 - ln 2 for al) at the
    dissolution end.  Defined up to a constant; this branch is the one used
    consistently across the package.
    """
    z = float(z)
    if not (0.0 < z < regime.z_max - CUTOFF_GUARD) or not math.isfinite(z):
        raise DomainError(
            f"z must lie in (0, {regime.z_max} - {CUTOFF_GUARD:g}), got {z!r}"
        )
    return _tau_closed_form(regime, z)


def return_invariant(regime: Regime, z: float) -> float:
    """Return-condition potential ``alpha(z) = ln z + tau(z)``.

    Unimodal with its maximum at z = 1 (where alpha'' = -nu), so each
    super-critical size has exactly one sub-critical partner with equal
    alpha.
    """
    return math.log(z) + flow_time(regime, z)


def evolve_scaled(regime: Regime, z_start: float, delta_tau: float) -> float:
    """Advance the rescaled flow: the z reached ``delta_tau`` after ``z_start``.

    Inverts the closed form tau(z) by bisection instead of integrating the
    ODE.  Raises ``DomainError`` when the trajectory dissolves (reaches
    z = 0) before ``delta_tau`` elapses.
    """
    z_start = float(z_start)
    delta_tau = float(delta_tau)
    if not (0.0 < z_start < regime.z_max - CUTOFF_GUARD):
        raise DomainError(
            f"z_start must lie in (0, {regime.z_max} - {CUTOFF_GUARD:g}), "
            f"got {z_start!r}"
        )
    if not (delta_tau >= 0.0 and math.isfinite(delta_tau)):
        raise DomainError(f"delta_tau must be >= 0, got {delta_tau!r}")
    if delta_tau == 0.0:
        return z_start

    tau_start = _tau_closed_form(regime, z_start)
    lifetime = _tau_closed_form(regime, 0.0) - tau_start
    if delta_tau >= lifetime:
        raise DomainError(
            f"trajectory from z={z_start!r} dissolves after delta_tau="
            f"{lifetime!r} < {delta_tau!r}"
        )
    target = tau_start + delta_tau
    return find_root(
        lambda z: _tau_closed_form(regime, z) - target,
        0.0,
        z_start,
        tol=Tolerance(abs_tol=1e-15, rel_tol=1e-13, max_iter=200),
    )


def scaled_trajectory(regime, z_start, delta_taus):
    """Sample a rescaled trajectory at the offsets ``delta_taus`` (>= 0,
    nondecreasing); returns a list of :class:`ScaledState`."""
    states = []
    prev = -math.inf
    for d in delta_taus:
        if d < prev:
            raise DomainError("delta_taus must be nondecreasing")
        prev = d
        states.append(ScaledState(evolve_scaled(regime, z_start, d), float(d)))
    return states
