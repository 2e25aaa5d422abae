"""Scaled particle size distributions of the two coarsening regimes.

In the self-similar late stage the rescaled sizes z = R/R_c are distributed
with the stationary densities

    dl:  h(z) = 81 e 2^(-5/3) z^2 (z+3)^(-7/3) (3/2 - z)^(-11/3) e^(-3/(3-2z))
    al:  h(z) = 24 z (2 - z)^(-5) e^(-3z/(2-z))

on (0, z_max), identically zero beyond the cutoff.  The essential
singularity in the exponent beats the diverging power prefactor, so h goes
to zero smoothly at z_max; numerically that fight overflows long before the
exponential wins, which is why evaluation happens in log space with an
underflow-to-zero policy.

Both densities integrate to exactly 1 as written (confirmed by quadrature
to full precision), so nothing here renormalizes.  The first moment is 1 in
the dl regime (the critical radius equals the mean radius) and 8/9 in the
al regime.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_QUAD_TOL, Tolerance, integrate
from .regime import Regime

__all__ = ["density", "SizeDistribution", "size_distribution"]

# log of the dl normalization constant 81 e 2^(-5/3)
_LOG_PREF_DL = math.log(81.0) + 1.0 - (5.0 / 3.0) * math.log(2.0)
_LOG_24 = math.log(24.0)
# exp() underflows to subnormal/zero around -745; below this the density is
# zero to double precision anyway.
_LOG_FLOOR = -740.0


def _log_density_dl(z, cut):
    # cut = 3/2 - z > 0; note 3 - 2z = 2*cut.
    return (
        _LOG_PREF_DL
        + 2.0 * np.log(z)
        - (7.0 / 3.0) * np.log(z + 3.0)
        - (11.0 / 3.0) * np.log(cut)
        - 1.5 / cut
    )


def _log_density_al(z, cut):
    # cut = 2 - z > 0.
    return _LOG_24 + np.log(z) - 5.0 * np.log(cut) - 3.0 * z / cut


def density(regime: Regime, z):
    """Scaled size density h(z); accepts a scalar or a numpy array.

    Zero at z = 0, zero for z >= z_max, positive in between; the exponent is
    evaluated in log space and flushed to 0.0 on underflow so the deep tail
    never produces inf/nan.

    Raises ``DomainError`` for any negative z.
    """
    log_f = _log_density_dl if regime.kind == "dl" else _log_density_al
    if isinstance(z, np.ndarray):
        if z.size and float(np.min(z)) < 0.0:
            raise DomainError("scaled sizes must be >= 0")
        out = np.zeros(z.shape, dtype=float)
        inside = (z > 0.0) & (z < regime.z_max)
        if np.any(inside):
            zi = z[inside]
            logs = log_f(zi, regime.z_max - zi)
            out[inside] = np.where(logs > _LOG_FLOOR, np.exp(logs), 0.0)
        return out
    z = float(z)
    if not (z >= 0.0 and math.isfinite(z)):
        raise DomainError(f"scaled size must be >= 0 and finite, got {z!r}")
    if z == 0.0 or z >= regime.z_max:
        return 0.0
    log_h = float(log_f(z, regime.z_max - z))
    # np.exp, not math.exp: they differ in the last ulp and the scalar and
    # array paths should agree bit for bit.
    return float(np.exp(log_h)) if log_h > _LOG_FLOOR else 0.0


class SizeDistribution:
    """Moments, CDF and inverse-CDF sampling for one regime's density.

    Immutable after construction: the moment cache only ever gains entries
    and the CDF table is built once, lazily.  Use :func:`size_distribution`
    to share instances.
    """

    #: number of nodes in the tabulated CDF
    CDF_POINTS = 4096

    def __init__(self, regime: Regime):
        self.regime = regime
        self._moments: dict[int, float] = {}
        self._cdf: tuple[np.ndarray, np.ndarray] | None = None

    def density(self, z):
        return density(self.regime, z)

    def moment(self, k: int, tol: Tolerance = DEFAULT_QUAD_TOL) -> float:
        """k-th moment of the density over its full support, cached for the
        default tolerance."""
        k = int(k)
        if k < 0:
            raise DomainError(f"moment order must be >= 0, got {k!r}")
        default = tol is DEFAULT_QUAD_TOL
        if default and k in self._moments:
            return self._moments[k]
        f = lambda z: density(self.regime, z) * z**k
        # Split at the mode region: the integrand is glassy-flat at both
        # ends and adaptive Simpson starts from a better first panel this way.
        zm = self.regime.z_max
        value = integrate(f, 0.0, 1.0, tol) + integrate(f, 1.0, zm, tol)
        if default:
            self._moments[k] = value
        return value

    @property
    def cdf_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Strictly increasing table (z, H(z)) with H(0) = 0, H(z_max) = 1."""
        if self._cdf is None:
            self._cdf = self._build_cdf_table()
        return self._cdf

    def _build_cdf_table(self):
        zm = self.regime.z_max
        n = self.CDF_POINTS
        # Chebyshev-style cosine spacing: nodes cluster at both endpoints,
        # where the density is flattest and steepest respectively.
        grid = 0.5 * zm * (1.0 - np.cos(np.linspace(0.0, math.pi, n)))
        # Composite 7-point Gauss-Legendre mass per panel (exact to ~1e-15
        # for these smooth panels at this resolution).
        gx, gw = np.polynomial.legendre.leggauss(7)
        mid = 0.5 * (grid[1:] + grid[:-1])
        half = 0.5 * (grid[1:] - grid[:-1])
        nodes = mid[:, None] + half[:, None] * gx[None, :]
        vals = density(self.regime, nodes.ravel()).reshape(nodes.shape)
        panel_mass = (vals * gw[None, :]).sum(axis=1) * half
        cdf = np.concatenate(([0.0], np.cumsum(panel_mass)))
        cdf /= cdf[-1]
        # The deep tail can produce zero-mass panels at double precision;
        # drop repeated ordinates so the table stays strictly increasing,
        # then anchor the exact endpoints.
        keep = np.concatenate(([True], np.diff(cdf) > 0.0))
        z_tab = grid[keep]
        h_tab = cdf[keep]
        h_tab[0] = 0.0
        if h_tab[-1] < 1.0:
            z_tab = np.append(z_tab, zm)
            h_tab = np.append(h_tab, 1.0)
        else:
            z_tab[-1] = zm
            h_tab[-1] = 1.0
        z_tab.setflags(write=False)
        h_tab.setflags(write=False)
        return z_tab, h_tab

    def cdf(self, z):
        """Cumulative distribution H(z), by monotone interpolation of the
        table; accepts a scalar or array, clamps outside the support."""
        z_tab, h_tab = self.cdf_table
        return np.interp(z, z_tab, h_tab)

    def sample(self, n: int, seed: int) -> np.ndarray:
        """n independent draws from the density via inverse-CDF lookup.

        Deterministic for a fixed seed; every sample lies in (0, z_max).
        """
        n = int(n)
        if n < 1:
            raise DomainError(f"sample size must be >= 1, got {n!r}")
        z_tab, h_tab = self.cdf_table
        rng = np.random.default_rng(seed)
        u = rng.random(n)
        return np.interp(u, h_tab, z_tab)


@lru_cache(maxsize=None)
def size_distribution(regime: Regime) -> SizeDistribution:
    """Shared :class:`SizeDistribution` instance for ``regime`` (moment and
    CDF caches are per-regime, so reuse them)."""
    return SizeDistribution(regime)
