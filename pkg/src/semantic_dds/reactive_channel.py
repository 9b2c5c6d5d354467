"""Particle-based estimate of the channel impulse response P_i(t | r0).

A particle is released at distance ``r0`` from the centre of a spherical
receiver of radius ``a``. While free it diffuses and may degrade; on
reaching the receiver surface it may bind, and a bound particle either
unbinds back into the medium or is internalised. The impulse response is
the cumulative fraction of particles internalised by time t.

Each trial owns a xoshiro256** stream derived from ``(seed, trial index)``,
so results do not depend on how trials are spread over threads.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field, replace

import numba as nb
import numpy as np
from scipy.special import erfc

if "NUMBA_THREADING_LAYER" not in os.environ:
    # OpenMP is thread-safe for concurrent callers; avoids probing an old TBB
    nb.config.THREADING_LAYER = "omp"

__all__ = [
    "SystemParameters",
    "SimulationSettings",
    "ImpulseResponse",
    "simulate_impulse",
    "hitting_probability_absorbing",
    "eventual_hit_with_degradation",
    "eventual_internalisation_reactive",
    "binding_probability",
    "set_threads",
]

# Config/intervention name -> dataclass field. ``lambda`` is a keyword.
PARAMETER_FIELDS = {
    "tau": "tau",
    "lambda": "lam",
    "k_d": "k_d",
    "k_f": "k_f",
    "k_b": "k_b",
    "k_i": "k_i",
    "D": "D",
    "a": "a",
    "r0": "r0",
    "C_th": "C_th",
    "n": "n",
    "epsilon": "epsilon",
}


@dataclass(frozen=True)
class SystemParameters:
    """Physical, chemical and channel parameters (SI units).

    Defaults are the reference scenario: 20 ms symbol interval, 1000
    particles/s, 0.5 um receiver at 1 um, Hill coefficient 10.
    """

    tau: float = 0.02
    lam: float = 1000.0
    k_d: float = 2e4
    k_f: float = 1e-14
    k_b: float = 2e4
    k_i: float = 1e3
    D: float = 5e-9
    a: float = 0.5e-6
    r0: float = 1e-6
    C_th: float = 0.05
    n: float = 10.0
    epsilon: float = 1e-2

    def __post_init__(self):
        for name in ("tau", "lam", "D", "a", "r0", "C_th"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{_key(name)} must be strictly positive, got {value!r}")
        # Zero rates are allowed: they are the limiting cases used for validation.
        for name in ("k_d", "k_f", "k_b", "k_i"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{_key(name)} must be non-negative, got {value!r}")
        if not self.n >= 1:
            raise ValueError(f"n must be >= 1, got {self.n!r}")
        if not 0 <= self.epsilon < 1:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon!r}")
        if not self.r0 > self.a:
            raise ValueError(f"r0 must exceed a (release point outside receiver), got r0={self.r0!r}, a={self.a!r}")

    def get(self, key: str) -> float:
        return getattr(self, PARAMETER_FIELDS[key])

    def with_value(self, key: str, value: float) -> "SystemParameters":
        """Copy with one parameter replaced, addressed by its config name."""
        return replace(self, **{PARAMETER_FIELDS[key]: float(value)})


def _key(field_name: str) -> str:
    return "lambda" if field_name == "lam" else field_name


@dataclass(frozen=True)
class SimulationSettings:
    """Monte Carlo controls. ``time_grid`` defaults to 200 uniform points on (0, tau]."""

    dt: float = 1e-6
    trials: int = 100_000
    seed: int = 2025
    time_grid: tuple[float, ...] | None = None
    bind_warning_threshold: float = 0.5

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.time_grid is not None:
            grid = np.asarray(self.time_grid, dtype=float)
            if grid.ndim != 1 or grid.size == 0:
                raise ValueError("time_grid must be a non-empty 1-d sequence")
            if grid[0] <= 0 or np.any(np.diff(grid) <= 0):
                raise ValueError("time_grid must be strictly increasing and positive")
            object.__setattr__(self, "time_grid", tuple(float(t) for t in grid))

    def grid_for(self, tau: float) -> np.ndarray:
        if self.time_grid is None:
            return tau * np.arange(1, 201) / 200
        return np.asarray(self.time_grid, dtype=float)


@dataclass(frozen=True)
class ImpulseResponse:
    times: np.ndarray
    p_i: np.ndarray
    stderr: np.ndarray
    trials: int
    bind_probability: float = field(default=float("nan"), compare=False)

    def __post_init__(self):
        for name in ("times", "p_i", "stderr"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def probability_at(self, t: float) -> float:
        """P_i at a sample time of the grid; ``t`` must be on the grid."""
        if t > self.times[-1] * (1 + 1e-12):
            raise ValueError(f"t={t!r} lies beyond the simulated horizon {self.times[-1]!r}")
        idx = int(np.argmin(np.abs(self.times - t)))
        if not math.isclose(self.times[idx], t, rel_tol=1e-9):
            raise ValueError(f"t={t!r} is not on the impulse-response time grid")
        return float(self.p_i[idx])

    def __eq__(self, other):
        if not isinstance(other, ImpulseResponse):
            return NotImplemented
        return (
            self.trials == other.trials
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.p_i, other.p_i)
            and np.array_equal(self.stderr, other.stderr)
        )

    __hash__ = None


# --- random streams ---------------------------------------------------------

_GAMMA = np.uint64(0x9E3779B97F4A7C15)


@nb.njit(cache=True, inline="always")
def _splitmix(x):
    z = x
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@nb.njit(cache=True, inline="always")
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@nb.njit(cache=True, inline="always")
def _uniform(s0, s1, s2, s3):
    """xoshiro256** step; returns the new state and a double in [0, 1)."""
    out = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    return s0, s1, s2, s3, (out >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@nb.njit(cache=True, parallel=True)
def _internalisation_steps(
    seed, trials, r0, a, D, dt, nsteps, p_degrade, p_bind, p_leave, p_internalise, absorbing
):
    """Step index (1-based) at which each trial is internalised, -1 if never."""
    steps = np.full(trials, -1, dtype=np.int64)
    sigma = math.sqrt(2.0 * D * dt)
    base = _splitmix(np.uint64(seed) + _GAMMA)
    for i in nb.prange(trials):
        x = base + np.uint64(i) * np.uint64(4) * _GAMMA
        s0 = _splitmix(x + _GAMMA)
        s1 = _splitmix(x + np.uint64(2) * _GAMMA)
        s2 = _splitmix(x + np.uint64(3) * _GAMMA)
        s3 = _splitmix(x + np.uint64(4) * _GAMMA)

        px, py, pz = r0, 0.0, 0.0
        bound = False
        have_spare = False
        spare = 0.0
        for k in range(1, nsteps + 1):
            if bound:
                s0, s1, s2, s3, u = _uniform(s0, s1, s2, s3)
                if u < p_leave:
                    s0, s1, s2, s3, u = _uniform(s0, s1, s2, s3)
                    if u < p_internalise:
                        steps[i] = k
                        break
                    bound = False
                    r = math.sqrt(px * px + py * py + pz * pz)
                    f = a * (1.0 + 1e-6) / r
                    px *= f
                    py *= f
                    pz *= f
                continue

            if p_degrade > 0.0:
                s0, s1, s2, s3, u = _uniform(s0, s1, s2, s3)
                if u < p_degrade:
                    break

            r_prev = math.sqrt(px * px + py * py + pz * pz)
            # three Gaussians from two Box-Muller pairs, carrying the spare
            s0, s1, s2, s3, u1 = _uniform(s0, s1, s2, s3)
            s0, s1, s2, s3, u2 = _uniform(s0, s1, s2, s3)
            m = math.sqrt(-2.0 * math.log(1.0 - u1))
            g1 = m * math.cos(2.0 * math.pi * u2)
            g2 = m * math.sin(2.0 * math.pi * u2)
            if have_spare:
                g3 = spare
                have_spare = False
            else:
                s0, s1, s2, s3, u1 = _uniform(s0, s1, s2, s3)
                s0, s1, s2, s3, u2 = _uniform(s0, s1, s2, s3)
                m = math.sqrt(-2.0 * math.log(1.0 - u1))
                g3 = m * math.cos(2.0 * math.pi * u2)
                spare = m * math.sin(2.0 * math.pi * u2)
                have_spare = True
            px += sigma * g1
            py += sigma * g2
            pz += sigma * g3
            r = math.sqrt(px * px + py * py + pz * pz)

            if absorbing:
                hit = r < a
                if not hit:
                    # Brownian-bridge crossing between two outside endpoints
                    s0, s1, s2, s3, u = _uniform(s0, s1, s2, s3)
                    hit = u < math.exp(-(r_prev - a) * (r - a) / (D * dt))
                if hit:
                    steps[i] = k
                    break
                continue

            if r < a:
                s0, s1, s2, s3, u = _uniform(s0, s1, s2, s3)
                if u < p_bind:
                    bound = True
                    f = a / r if r > 0.0 else 1.0
                else:
                    f = (2.0 * a - r) / r if r > 0.0 else 1.0
                px *= f
                py *= f
                pz *= f
    return steps


def set_threads(n: int | None) -> int:
    """Set the simulator's worker thread count (clamped to what numba allows)."""
    if n is None:
        return nb.get_num_threads()
    if n < 1:
        raise ValueError(f"thread count must be positive, got {n!r}")
    n = min(int(n), nb.config.NUMBA_NUM_THREADS)
    nb.set_num_threads(n)
    return n


def binding_probability(params: SystemParameters, dt: float) -> float:
    """Unclamped per-collision binding probability kappa*sqrt(pi*dt/D), kappa = k_f/(4 pi a^2)."""
    kappa = params.k_f / (4.0 * math.pi * params.a**2)
    return kappa * math.sqrt(math.pi * dt / params.D)


def simulate_impulse(
    params: SystemParameters, settings: SimulationSettings, *, absorbing: bool = False
) -> ImpulseResponse:
    """Estimate the cumulative internalisation probability on ``settings``' time grid.

    With ``absorbing=True`` the receiver is a perfect absorber (every surface
    crossing internalises immediately, k_b/k_i ignored) and crossings inside
    a step are detected with the Brownian-bridge probability
    exp(-(r1-a)(r2-a)/(D dt)); this is the configuration the closed-form
    first-passage results describe.
    """
    times = settings.grid_for(params.tau)
    if times[-1] > params.tau * (1 + 1e-12):
        raise ValueError(f"time grid ends at {times[-1]!r}, beyond tau={params.tau!r}")
    if settings.dt > params.tau / 100 * (1 + 1e-12):
        raise ValueError(f"dt={settings.dt!r} exceeds tau/100={params.tau / 100!r}")

    dt = settings.dt
    raw_bind = 1.0 if absorbing else binding_probability(params, dt)
    if not absorbing and raw_bind > settings.bind_warning_threshold:
        warnings.warn(
            f"binding probability per collision is {raw_bind:.3g} (threshold "
            f"{settings.bind_warning_threshold}); reduce dt for an accurate surface reaction",
            RuntimeWarning,
            stacklevel=2,
        )
    p_bind = min(raw_bind, 1.0)
    total = params.k_b + params.k_i
    p_leave = -math.expm1(-total * dt)
    p_internalise = params.k_i / total if total > 0 else 0.0

    nsteps = int(math.ceil(times[-1] / dt - 1e-9))
    steps = _internalisation_steps(
        np.uint64(settings.seed),
        int(settings.trials),
        params.r0,
        params.a,
        params.D,
        dt,
        nsteps,
        -math.expm1(-params.k_d * dt),
        p_bind,
        p_leave,
        p_internalise,
        absorbing,
    )

    hit = np.sort(steps[steps > 0])
    # last step whose end time is <= t, guarded against float rounding in t/dt
    limits = np.floor(times / dt * (1 + 1e-12)).astype(np.int64)
    counts = np.searchsorted(hit, limits, side="right")
    p_i = counts / settings.trials
    stderr = np.sqrt(p_i * (1 - p_i) / settings.trials)
    return ImpulseResponse(times, p_i, stderr, int(settings.trials), bind_probability=raw_bind)


# --- closed-form limiting cases ---------------------------------------------


def _check_geometry(D, a, r0):
    if not (D > 0 and a > 0):
        raise ValueError("D and a must be positive")
    if not r0 > a:
        raise ValueError(f"r0 must exceed a, got r0={r0!r}, a={a!r}")


def hitting_probability_absorbing(D: float, a: float, r0: float, t: float) -> float:
    """Probability a Brownian particle from r0 hits an absorbing sphere of radius a by time t."""
    _check_geometry(D, a, r0)
    if math.isinf(t):
        return a / r0
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    return (a / r0) * float(erfc((r0 - a) / (2.0 * math.sqrt(D * t))))


def eventual_hit_with_degradation(D: float, a: float, r0: float, k_d: float) -> float:
    """Probability of ever hitting an absorbing sphere under first-order decay k_d."""
    _check_geometry(D, a, r0)
    if not k_d >= 0:
        raise ValueError(f"k_d must be non-negative, got {k_d!r}")
    return (a / r0) * math.exp(-(r0 - a) * math.sqrt(k_d / D))


def eventual_internalisation_reactive(params: SystemParameters) -> float:
    """Infinite-horizon internalisation probability for the reactive receiver.

    Continuum limit (dt -> 0) of the simulated model: radiation boundary with
    reactivity k_f/(4 pi a^2), decay k_d, and repeated bind/unbind cycles
    restarting from the surface. Used as a cross-check only; the simulator
    carries an O(sqrt(dt)) discretisation bias relative to it.
    """
    D, a, r0 = params.D, params.a, params.r0
    _check_geometry(D, a, r0)
    kappa = params.k_f / (4.0 * math.pi * a**2)
    alpha = math.sqrt(params.k_d / D)
    from_surface = kappa * a / (kappa * a + D * (1.0 + alpha * a))
    first_bind = (a / r0) * math.exp(-alpha * (r0 - a)) * from_surface
    total = params.k_b + params.k_i
    if total == 0:
        return 0.0
    q = params.k_i / total
    return first_bind * q / (1.0 - (1.0 - q) * from_surface)
