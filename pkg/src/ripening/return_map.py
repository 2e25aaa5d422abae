"""Return map: when does a growing particle shrink back to its old size?

A particle that is super-critical at time t0 (z0 = R/R_c(t0) > 1) first
grows, but the critical radius grows faster; the particle eventually goes
sub-critical, shrinks, and passes its original *physical* radius R on the
way down.  Because R is the same at both moments while R_c has moved, the
two rescaled sizes z0 and rho satisfy

    z0 * R_c(t0) = rho * R_c(t),

and eliminating R_c through the rescaled flow turns this into the matching
condition alpha(rho) = alpha(z0) with alpha = ln z + tau(z).  alpha is
unimodal with its peak at z = 1, so rho(z0) is the unique sub-critical
partner of z0; the elapsed-time ratio follows from the coarsening law as a
pure power of the size ratio, s = t/t0 = (z0/rho)**gamma, independent of t0
and of R_c(t0).

All solves here run in u = ln z, which keeps the bracket well-behaved even
when rho underflows the smallest positive float (z0 extremely close to
z_max): tau(e^u) tends to the finite tau(0) as u -> -inf, so the matching
function is still exact where exp() has flushed to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import Tolerance, find_root
from .regime import Regime, _tau_closed_form, critical_radius, return_invariant

__all__ = [
    "ReturnPoint",
    "return_size",
    "return_size_slope_at_one",
    "return_time_ratio",
    "initial_size_for_ratio",
    "solve_return_point",
    "return_point_for_ratio",
    "return_radius",
    "return_radius_rate",
]

# z0 this close to z_max is rejected: tau diverges and s blows up like
# 1/(z_max - z0)**gamma, so there is nothing meaningful to resolve beyond it.
NEAR_CUTOFF = 1e-9

_LOG_TOL = Tolerance(abs_tol=1e-13, rel_tol=1e-13, max_iter=200)


@dataclass(frozen=True)
class ReturnPoint:
    """A matched pair on the return map: grow from z0, return at z_return,
    elapsed-time ratio s = t/t0."""

    z0: float
    z_return: float
    s: float

    def __post_init__(self):
        if not (0.0 <= self.z_return <= 1.0 <= self.z0):
            raise DomainError(
                f"return pair must satisfy z_return <= 1 <= z0, got "
                f"({self.z_return!r}, {self.z0!r})"
            )
        if not self.s >= 1.0:
            raise DomainError(f"time ratio must be >= 1, got {self.s!r}")


def _check_z0(regime: Regime, z0: float) -> float:
    z0 = float(z0)
    if not (math.isfinite(z0) and 1.0 <= z0 <= regime.z_max - NEAR_CUTOFF):
        raise DomainError(
            f"initial scaled size must lie in [1, z_max - {NEAR_CUTOFF:g}] = "
            f"[1, {regime.z_max - NEAR_CUTOFF!r}], got {z0!r}"
        )
    return z0


def _log_rho(regime: Regime, z0: float) -> float:
    """ln(rho(z0)), solved in log space (see module docstring)."""
    if z0 == 1.0:
        return 0.0
    target = return_invariant(regime, z0)
    tau0 = _tau_closed_form(regime, 0.0)

    def f(u: float) -> float:
        # exp(u) may underflow to 0.0 for very negative u; the closed form
        # is finite there, so the matching function stays exact.
        return u + _tau_closed_form(regime, math.exp(u)) - target

    # alpha(e^u) <= u + tau(0) for u <= 0, so this lower end is always on
    # the negative side of the target while u = 0 is on the positive side.
    u_lo = target - tau0 - 1.0
    return find_root(f, u_lo, 0.0, tol=_LOG_TOL)


def return_size(regime: Regime, z0: float) -> float:
    """Sub-critical return size: the rho in (0, 1] with alpha(rho) = alpha(z0).

    Strictly decreasing in z0, with rho(1) = 1 and rho -> 0 as z0 -> z_max.
    For z0 within about 1e-3 of the cutoff the true value underflows float64
    and 0.0 is returned; the matching is still exact in ln-space through
    :func:`return_time_ratio`.
    """
    z0 = _check_z0(regime, z0)
    return math.exp(_log_rho(regime, z0))


def return_size_slope_at_one(regime: Regime) -> float:
    """Slope of the return map at the fixed point: exactly -1.

    alpha is smooth with a quadratic maximum at z = 1, so matched pairs are
    symmetric about it to first order regardless of regime.
    """
    return -1.0


def _exp_or_inf(arg: float) -> float:
    # s grows like exp(gamma/(2*(z_max - z0))) near the cutoff, which leaves
    # float64 range while z0 is still ~1e-3 away from it; the correctly
    # rounded answer there is inf, not an exception.
    try:
        return math.exp(arg)
    except OverflowError:
        return math.inf


def return_time_ratio(regime: Regime, z0: float) -> float:
    """Elapsed-time ratio s = t/t0 = (z0/rho(z0))**gamma for the return.

    Computed as exp(gamma * (ln z0 - ln rho)) so the matching stays exact
    even where rho itself underflows; ratios beyond float64 range come back
    as inf.
    """
    z0 = _check_z0(regime, z0)
    if z0 == 1.0:
        return 1.0
    g = regime.coarsening_exponent
    return _exp_or_inf(g * (math.log(z0) - _log_rho(regime, z0)))


def initial_size_for_ratio(regime: Regime, s: float) -> float:
    """Invert the time ratio: the z0 in [1, z_max) with s = (z0/rho(z0))**gamma.

    The ratio is strictly increasing in z0 (from 1 at z0 = 1 to +inf at the
    cutoff), so the root is unique; s < 1 is rejected.
    """
    s = float(s)
    if not (s >= 1.0 and math.isfinite(s)):
        raise DomainError(f"time ratio must be >= 1 and finite, got {s!r}")
    if s == 1.0:
        return 1.0
    g = regime.coarsening_exponent
    log_s = math.log(s)

    def f(z0: float) -> float:
        if z0 == 1.0:
            return -log_s
        return g * (math.log(z0) - _log_rho(regime, z0)) - log_s

    return find_root(f, 1.0, regime.z_max - NEAR_CUTOFF)


def solve_return_point(regime: Regime, z0: float) -> ReturnPoint:
    """Bundle rho(z0) and the time ratio into a :class:`ReturnPoint`."""
    z0 = _check_z0(regime, z0)
    if z0 == 1.0:
        return ReturnPoint(1.0, 1.0, 1.0)
    u = _log_rho(regime, z0)
    s = _exp_or_inf(regime.coarsening_exponent * (math.log(z0) - u))
    return ReturnPoint(z0, math.exp(u), s)


def return_point_for_ratio(regime: Regime, s: float) -> ReturnPoint:
    """The :class:`ReturnPoint` whose elapsed-time ratio is ``s``."""
    return solve_return_point(regime, initial_size_for_ratio(regime, s))


def return_radius(regime: Regime, t: float, t0: float, r_c0: float = 0.0) -> float:
    """Radius of the particle that returns to its initial size at time ``t``.

    Among all particles present at ``t0``, one boundary radius separates
    "still larger than at t0" from "already smaller again": the particle
    that is passing its original size right now.  Its radius is

        R(t; t0) = initial_size_for_ratio(t/t0) * R_c(t0).

    The critical radius uses the exact ``r_c0``, but the z-rescaling uses
    the pure power-law ratio s = t/t0 — a late-stage approximation that is
    exact when ``r_c0 = 0`` (the default baseline, where R_c**gamma is
    proportional to t) and accurate once ``r_c0**gamma`` is small against
    the elapsed coarsening.
    """
    t = float(t)
    t0 = float(t0)
    if not (t0 > 0.0 and math.isfinite(t0)):
        raise DomainError(f"t0 must be positive and finite, got {t0!r}")
    if not (t >= t0 and math.isfinite(t)):
        raise DomainError(f"t must be >= t0, got t={t!r}, t0={t0!r}")
    r_c = critical_radius(regime, r_c0, t0)
    return initial_size_for_ratio(regime, t / t0) * r_c


def return_radius_rate(regime: Regime, t0: float, r_c0: float = 0.0) -> float:
    """Initial growth rate of the return radius at t = t0.

    d(return_radius)/dt at t = t0 is R_c(t0) / (2 gamma t0): the time-ratio
    derivative ds/dz0 equals 2 gamma at the fixed point, inverted and scaled
    by the clock.
    """
    t0 = float(t0)
    if not (t0 > 0.0 and math.isfinite(t0)):
        raise DomainError(f"t0 must be positive and finite, got {t0!r}")
    r_c = critical_radius(regime, r_c0, t0)
    return r_c / (2.0 * regime.coarsening_exponent * t0)
