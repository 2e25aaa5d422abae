"""Direct N-particle mean-field coarsening simulator.

Every particle follows the physical growth law of its regime under a shared
mean field computed self-consistently from the population:

    dl:  u = n / sum(R)         (so R_c = 1/u is the arithmetic mean radius)
    al:  u = sum(R) / sum(R^2)

The state is integrated in the volume variable y = R^3, where the growth
laws become

    dl:  dy/dt = 3 (R u - 1)
    al:  dy/dt = 3 (R^2 u - R),

and the mean-field definitions make sum(dy/dt) vanish identically — total
particle volume is a linear first integral, so any Runge-Kutta step
conserves it to rounding, with no tolerance knob involved.  Particles whose
volume falls below the deletion threshold are removed and their volume
moved to an explicit ledger, keeping

    (4/3) pi sum(R^3) + lost_volume

constant to near machine precision over a whole run.

The stepper is Heun's method with an adaptive substep: the largest relative
volume change per substep is capped for all particles at least half the
critical radius.  Particles below that are in free fall toward dissolution
(their relative rates diverge as R -> 0, and nothing that shrinks past
R_c/2 ever comes back), so capping on them would grind the step size to
zero; their volumes are tiny and end up in the ledger regardless of how
coarsely their last moments are resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import size_distribution
from .errors import DataError, DomainError, StateError
from .recrystallization import new_volume_fraction
from .regime import Regime, coarsening_slope, critical_radius
from .return_map import return_radius

__all__ = [
    "FOUR_THIRDS_PI",
    "Snapshot",
    "TimeSeries",
    "NewVolume",
    "Ensemble",
    "init_ensemble",
    "measure_new_volume",
    "empirical_return_radius",
    "initial_order_preserved",
    "LateStageComparison",
    "LateStageResult",
    "simulate_late_stage",
    "write_snapshot_csv",
    "write_series_csv",
]

FOUR_THIRDS_PI = 4.0 * math.pi / 3.0


@dataclass(frozen=True)
class Snapshot:
    """Radii by particle identity at one instant."""

    t: float
    ids: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        radii = np.asarray(self.radii, dtype=float)
        if ids.shape != radii.shape or ids.ndim != 1:
            raise DataError("ids and radii must be 1-d arrays of equal length")
        if ids.size and np.any(np.diff(ids) <= 0):
            raise DataError("ids must be strictly increasing")
        if radii.size and float(np.min(radii)) <= 0.0:
            raise DataError("snapshot radii must be positive")
        ids.setflags(write=False)
        radii.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "radii", radii)

    @property
    def n(self) -> int:
        return int(self.ids.size)


@dataclass
class TimeSeries:
    """Per-substep diagnostics recorded during a run."""

    t: np.ndarray
    n: np.ndarray
    rc_estimate: np.ndarray
    total_r3: np.ndarray
    lost_volume: np.ndarray


@dataclass(frozen=True)
class NewVolume:
    """Volume formed since the reference snapshot, and its share of the
    current total."""

    volume: float
    fraction: float


class _SeriesRecorder:
    def __init__(self):
        self.rows = ([], [], [], [], [])

    def add(self, ens: "Ensemble"):
        t, n, rc, r3, lost = self.rows
        t.append(ens.t)
        n.append(ens.n)
        rc.append(ens.mean_field()[1])
        r3.append(float(np.sum(ens._y)))
        lost.append(ens.lost_volume)

    def build(self) -> TimeSeries:
        t, n, rc, r3, lost = self.rows
        return TimeSeries(
            np.array(t, dtype=float),
            np.array(n, dtype=np.int64),
            np.array(rc, dtype=float),
            np.array(r3, dtype=float),
            np.array(lost, dtype=float),
        )


class Ensemble:
    """Mutable population of particle radii under one regime's dynamics.

    Parameters
    ----------
    regime:
        Kinetic regime providing the growth law and mean-field closure.
    radii:
        Initial particle radii, all positive, at least two.
    start_time:
        Clock value of the initial state.
    deletion_fraction:
        A particle is removed once its radius falls below this fraction of
        the current critical radius (its volume is ledgered).
    step_fraction:
        Cap on ``|dR|/R`` per substep for particles above half the critical
        radius; sets the adaptive substep.
    """

    def __init__(
        self,
        regime: Regime,
        radii,
        *,
        start_time: float = 0.0,
        deletion_fraction: float = 1e-4,
        step_fraction: float = 1e-3,
    ):
        radii = np.asarray(radii, dtype=float)
        if radii.ndim != 1 or radii.size < 2:
            raise DomainError("an ensemble needs at least two particles")
        if not np.all(np.isfinite(radii)) or float(np.min(radii)) <= 0.0:
            raise DomainError("all radii must be positive and finite")
        if not 0.0 < deletion_fraction < 0.5:
            raise DomainError("deletion_fraction must lie in (0, 0.5)")
        if not 0.0 < step_fraction <= 0.1:
            raise DomainError("step_fraction must lie in (0, 0.1]")
        self.regime = regime
        self.deletion_fraction = float(deletion_fraction)
        self.step_fraction = float(step_fraction)
        self._t = float(start_time)
        self._y = radii.astype(float) ** 3
        self._ids = np.arange(radii.size, dtype=np.int64)
        self._lost = 0.0

    # -- read-only views ---------------------------------------------------

    @property
    def t(self) -> float:
        return self._t

    @property
    def n(self) -> int:
        return int(self._y.size)

    @property
    def ids(self) -> np.ndarray:
        return self._ids.copy()

    @property
    def radii(self) -> np.ndarray:
        return np.cbrt(self._y)

    @property
    def lost_volume(self) -> float:
        return self._lost

    @property
    def epsilon(self) -> float:
        """Current deletion threshold (a fraction of the critical radius)."""
        return self.deletion_fraction * self.mean_field()[1]

    def mean_field(self) -> tuple[float, float]:
        """Self-consistent mean field u and the critical radius R_c = 1/u."""
        if self._y.size == 0:
            raise StateError("mean field undefined for an empty ensemble")
        r = np.cbrt(self._y)
        if self.regime.kind == "dl":
            u = self._y.size / float(np.sum(r))
        else:
            u = float(np.sum(r)) / float(np.sum(r * r))
        return u, 1.0 / u

    def total_volume(self) -> float:
        """(4/3) pi sum(R^3) of the particles currently present."""
        return FOUR_THIRDS_PI * float(np.sum(self._y))

    def conserved_total(self) -> float:
        """Particle volume plus the deletion ledger; constant over a run."""
        return self.total_volume() + self._lost

    def snapshot(self) -> Snapshot:
        return Snapshot(self._t, self._ids.copy(), np.cbrt(self._y))

    # -- dynamics ----------------------------------------------------------

    def _volume_rates(self, r: np.ndarray) -> np.ndarray:
        # r may contain small negative values mid-stage (a dying particle
        # overshooting zero before the sweep); both laws stay smooth there.
        if self.regime.kind == "dl":
            u = r.size / float(np.sum(r))
            return 3.0 * (r * u - 1.0)
        u = float(np.sum(r)) / float(np.sum(r * r))
        return 3.0 * (r * r * u - r)

    def _max_substep(self, y, rates, r_c) -> float:
        # Cap |dy|/y = 3 |dR|/R per substep, enforced for every particle
        # above half the critical radius (see module docstring).
        watched = y >= (0.5 * r_c) ** 3
        if not np.any(watched):  # defensive; the largest particle always is
            watched = slice(None)
        fastest = float(np.max(np.abs(rates[watched]) / y[watched]))
        if fastest <= 0.0:
            return math.inf
        return 3.0 * self.step_fraction / fastest

    def _sweep_dissolved(self):
        _, r_c = self.mean_field()
        cut = (self.deletion_fraction * r_c) ** 3
        dead = self._y < cut
        if np.any(dead):
            # Ledger the actual volumes (a late overshoot may be slightly
            # negative) so the conservation identity stays exact.
            self._drop(dead)

    def _drop(self, dead: np.ndarray):
        self._lost += FOUR_THIRDS_PI * float(np.sum(self._y[dead]))
        self._y = self._y[~dead]
        self._ids = self._ids[~dead]
        if self._y.size < 2:
            raise StateError(
                f"ensemble collapsed to {self._y.size} particle(s) at "
                f"t={self._t!r}"
            )

    def _advance(self, t_target: float, recorder=None):
        while True:
            self._sweep_dissolved()
            remaining = t_target - self._t
            if remaining <= 0.0:
                break
            # Pre-empt dissolutions: a particle predicted to cross the
            # deletion threshold within this substep is removed up front
            # (its volume ledgered) and the rates are recomputed from the
            # survivors, so the sum of the applied rates is still exactly
            # zero.  Without this, a dying particle whose trial stage
            # overshoots past zero can see its stage rates cancel (the al
            # volume rate is odd in R near zero) and hover at the threshold
            # indefinitely.
            while True:
                y = self._y
                _, r_c = self.mean_field()
                k1 = self._volume_rates(np.cbrt(y))
                h = min(self._max_substep(y, k1, r_c), remaining)
                dying = (y + h * k1) <= (self.deletion_fraction * r_c) ** 3
                if not np.any(dying):
                    break
                self._drop(dying)
            if h >= remaining:
                h = remaining
                t_next = t_target
            else:
                t_next = self._t + h
            k2 = self._volume_rates(np.cbrt(y + h * k1))
            self._y = y + (0.5 * h) * (k1 + k2)
            self._t = t_next
            if recorder is not None:
                recorder(self)

    def step(self, dt: float):
        """Advance the ensemble by ``dt`` (internally substepped)."""
        dt = float(dt)
        if not (dt > 0.0 and math.isfinite(dt)):
            raise DomainError(f"dt must be positive and finite, got {dt!r}")
        self._advance(self._t + dt)

    def run(self, t_end: float, snapshot_times=()):
        """Advance to ``t_end``, returning snapshots at the requested times
        plus a per-substep :class:`TimeSeries` of diagnostics.

        ``snapshot_times`` must be sorted, within ``[current t, t_end]``; a
        snapshot requested at the current time is taken before stepping.
        """
        t_end = float(t_end)
        if not (t_end > self._t and math.isfinite(t_end)):
            raise DomainError(
                f"t_end must exceed the current time {self._t!r}, got {t_end!r}"
            )
        times = [float(ts) for ts in snapshot_times]
        if any(b < a for a, b in zip(times, times[1:])):
            raise DomainError("snapshot times must be sorted")
        if times and (times[0] < self._t or times[-1] > t_end):
            raise DomainError(
                f"snapshot times must lie within [{self._t!r}, {t_end!r}]"
            )
        recorder = _SeriesRecorder()
        recorder.add(self)
        snapshots = []
        for ts in times:
            if ts > self._t:
                self._advance(ts, recorder.add)
            snapshots.append(self.snapshot())
        if t_end > self._t:
            self._advance(t_end, recorder.add)
        return snapshots, recorder.build()


def init_ensemble(
    regime: Regime, n: int, r_c0: float, seed: int, **ensemble_options
) -> Ensemble:
    """Draw ``n`` radii from the regime's stationary size density, scaled by
    the starting critical radius ``r_c0``; particle ids are 0..n-1."""
    n = int(n)
    if n < 2:
        raise DomainError(f"need at least two particles, got n={n!r}")
    r_c0 = float(r_c0)
    if not (r_c0 > 0.0 and math.isfinite(r_c0)):
        raise DomainError(f"r_c0 must be positive and finite, got {r_c0!r}")
    z = size_distribution(regime).sample(n, seed)
    return Ensemble(regime, r_c0 * z, **ensemble_options)


def _align(before: Snapshot, after: Snapshot) -> np.ndarray:
    if after.t < before.t:
        raise DataError(
            f"'after' snapshot precedes 'before' ({after.t!r} < {before.t!r})"
        )
    if after.ids.size == 0:
        raise DataError("'after' snapshot is empty")
    idx = np.searchsorted(before.ids, after.ids)
    if np.any(idx >= before.ids.size) or np.any(
        before.ids[np.minimum(idx, before.ids.size - 1)] != after.ids
    ):
        raise DataError("'after' ids are not a subset of 'before' ids")
    return idx


def measure_new_volume(before: Snapshot, after: Snapshot) -> NewVolume:
    """Volume formed between two snapshots: the sum of R(t)^3 - R(t0)^3 over
    particles that are at least as large as they started, as an absolute
    volume and as a fraction of the current total."""
    idx = _align(before, after)
    r0 = before.radii[idx]
    r1 = after.radii
    grown = r1 >= r0
    volume = FOUR_THIRDS_PI * float(np.sum(r1[grown] ** 3 - r0[grown] ** 3))
    total = FOUR_THIRDS_PI * float(np.sum(r1**3))
    return NewVolume(volume, volume / total)


def empirical_return_radius(before: Snapshot, after: Snapshot) -> float:
    """Boundary initial radius separating particles still above their
    starting size from those already below it again: the midpoint between
    the largest shrunk and the smallest grown initial radius."""
    idx = _align(before, after)
    r0 = before.radii[idx]
    grown = after.radii >= r0
    if not np.any(grown) or np.all(grown):
        raise DataError("no grown/shrunk boundary between these snapshots")
    return 0.5 * (float(np.max(r0[~grown])) + float(np.min(r0[grown])))


def initial_order_preserved(before: Snapshot, after: Snapshot) -> bool:
    """True when the grown set is an up-set in initial radius, i.e. the
    mean-field ordering survived: every grown particle started above every
    shrunk one."""
    idx = _align(before, after)
    r0 = before.radii[idx]
    grown = after.radii >= r0
    if not np.any(grown) or np.all(grown):
        return True
    return float(np.max(r0[~grown])) < float(np.min(r0[grown]))


@dataclass(frozen=True)
class LateStageComparison:
    """Simulation vs analytics at one snapshot time."""

    t: float
    s: float
    new_fraction_empirical: float
    new_fraction_analytic: float
    boundary_radius_empirical: float
    boundary_radius_analytic: float

    @property
    def fraction_rel_err(self) -> float:
        a = self.new_fraction_analytic
        return abs(self.new_fraction_empirical - a) / a

    @property
    def boundary_rel_err(self) -> float:
        a = self.boundary_radius_analytic
        return abs(self.boundary_radius_empirical - a) / a


@dataclass
class LateStageResult:
    """Everything produced by :func:`simulate_late_stage`."""

    regime: Regime
    n_init: int
    t0: float
    t_end: float
    seed: int
    r_c0: float
    conservation_residual: float
    rc_power_slope: float
    rc_power_slope_expected: float
    comparisons: list
    base: Snapshot
    snapshots: list
    series: TimeSeries


def simulate_late_stage(
    regime: Regime,
    n: int,
    t0: float,
    t_end: float,
    snapshot_times,
    seed: int,
    **ensemble_options,
) -> LateStageResult:
    """Run an ensemble against the analytic late-stage predictions.

    Times are on the coarsening clock where ``R_c**gamma = (gamma/nu) t``
    holds exactly: the run starts at ``t0`` with the critical radius the
    analytic law assigns to that instant and the population already at the
    stationary size density (its fixed point), so every particle is alive
    at the reference time and the elapsed-time ratio is exactly
    ``s = t/t0``.  Snapshot times are absolute (in ``(t0, t_end]``); at each
    one the measured new-volume fraction and grown/shrunk boundary radius
    are compared against their analytic values.
    """
    t0 = float(t0)
    t_end = float(t_end)
    if not (t0 > 0.0 and math.isfinite(t0)):
        raise DomainError(f"t0 must be positive and finite, got {t0!r}")
    if not (t_end > t0 and math.isfinite(t_end)):
        raise DomainError(f"t_end must exceed t0, got {t_end!r}")
    times = sorted(float(ts) for ts in snapshot_times)
    if times and (times[0] <= t0 or times[-1] > t_end):
        raise DomainError(
            f"snapshot times must lie in ({t0!r}, {t_end!r}]"
        )

    r_c0 = critical_radius(regime, 0.0, t0)
    ens = init_ensemble(regime, n, r_c0, seed, **ensemble_options)
    base = ens.snapshot()
    start_total = ens.conserved_total()

    snapshots, series = ens.run(t_end - t0, [ts - t0 for ts in times])
    residual = abs(ens.conserved_total() - start_total) / start_total

    gamma = regime.coarsening_exponent
    slope = float(
        np.polyfit(t0 + series.t, series.rc_estimate**gamma, 1)[0]
    )

    comparisons = []
    for ts, snap in zip(times, snapshots):
        s = ts / t0
        measured = measure_new_volume(base, snap)
        comparisons.append(
            LateStageComparison(
                t=ts,
                s=s,
                new_fraction_empirical=measured.fraction,
                new_fraction_analytic=new_volume_fraction(regime, s),
                boundary_radius_empirical=empirical_return_radius(base, snap),
                boundary_radius_analytic=return_radius(regime, ts, t0, 0.0),
            )
        )

    return LateStageResult(
        regime=regime,
        n_init=int(n),
        t0=t0,
        t_end=t_end,
        seed=int(seed),
        r_c0=r_c0,
        conservation_residual=residual,
        rc_power_slope=slope,
        rc_power_slope_expected=coarsening_slope(regime),
        comparisons=comparisons,
        base=base,
        snapshots=snapshots,
        series=series,
    )


def _format_value(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_table(path, columns, rows, comment=None):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if comment is not None:
            fh.write(f"# {comment}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def write_snapshot_csv(snapshot: Snapshot, path, comment=None):
    """Write a snapshot as ``id,radius`` CSV (one leading # comment line)."""
    _write_table(path, ("id", "radius"), zip(snapshot.ids, snapshot.radii), comment)


def write_series_csv(series: TimeSeries, path, comment=None):
    """Write a run's diagnostics as ``t,n,rc_estimate,total_r3,lost_volume``
    CSV (one leading # comment line)."""
    rows = zip(series.t, series.n, series.rc_estimate, series.total_r3,
               series.lost_volume)
    _write_table(
        path, ("t", "n", "rc_estimate", "total_r3", "lost_volume"), rows, comment
    )
