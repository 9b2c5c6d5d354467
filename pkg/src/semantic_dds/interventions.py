"""Counter-factual intervention sweeps and semantic-information extraction.

One parameter at a time is moved across a grid; at each value we compute
P_i(tau), the crossover probability, the internalised dose, the viability
and the Z-channel capacity. The semantic information S_eps(tau) is the
smallest capacity among the points whose viability is within ``epsilon``
of the best (lowest) viability on the curve.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .pharmacodynamics import internalised_concentration, particle_budget, viability
from .pic_information import capacity_closed_form, crossover_probability
from .reactive_channel import ImpulseResponse, SimulationSettings, SystemParameters, simulate_impulse

__all__ = [
    "InterventionSpec",
    "SweepPoint",
    "SweepCurve",
    "SemanticResult",
    "DEFAULT_INTERVENTIONS",
    "INTERVENABLE",
    "point_seed",
    "evaluate_point",
    "simulate_family",
    "curve_from_impulses",
    "sweep",
    "extract_semantic_information",
    "temporal_profile",
    "temporal_from_impulses",
]

# Stable integer ids keep derived seeds independent of spec ordering.
INTERVENABLE = {"lambda": 0, "k_d": 1, "k_f": 2, "k_b": 3, "k_i": 4}


@dataclass(frozen=True)
class InterventionSpec:
    parameter: str
    range_min: float
    range_max: float
    grid_points: int = 61
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in INTERVENABLE:
            raise ValueError(
                f"parameter must be one of {sorted(INTERVENABLE)}, got {self.parameter!r}"
            )
        if not self.range_min < self.range_max:
            raise ValueError(f"range_min must be < range_max for {self.parameter}")
        if self.range_min < 0 or (self.scale == "log" and self.range_min <= 0):
            raise ValueError(f"range for {self.parameter} must be positive")
        if int(self.grid_points) != self.grid_points or self.grid_points < 2:
            raise ValueError(f"grid_points must be an integer >= 2, got {self.grid_points!r}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.range_min, self.range_max, int(self.grid_points))
        return np.linspace(self.range_min, self.range_max, int(self.grid_points))


DEFAULT_INTERVENTIONS = (
    InterventionSpec("lambda", 1000.0, 4000.0),
    InterventionSpec("k_d", 1000.0, 20000.0),
    InterventionSpec("k_f", 1e-14, 4e-14, scale="log"),
    InterventionSpec("k_b", 5000.0, 20000.0),
    InterventionSpec("k_i", 1000.0, 5000.0),
)


@dataclass(frozen=True)
class SweepPoint:
    value: float
    p_i: float
    mu_p: float
    c_int: float
    viability: float
    capacity: float


@dataclass(frozen=True)
class SweepCurve:
    spec: InterventionSpec
    points: tuple[SweepPoint, ...]
    tau: float

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points], dtype=float)


@dataclass(frozen=True)
class SemanticResult:
    s_epsilon: float
    critical_value: float
    admissible_set_size: int
    v_min: float
    meaningless_range: tuple[float, float] | None
    epsilon: float
    # spacing to the neighbouring grid point on the high-viability side
    critical_uncertainty: float = 0.0


def point_seed(seed: int, parameter: str, index: int) -> int:
    """Per-point simulation seed derived from (master seed, parameter, grid index)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(INTERVENABLE[parameter], int(index)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _point_from_p_i(value: float, p_i: float, params: SystemParameters, tau: float) -> SweepPoint:
    budget = particle_budget(params.lam, tau)
    mu = crossover_probability(p_i, budget)
    c = internalised_concentration(p_i, budget)
    return SweepPoint(
        value=float(value),
        p_i=float(p_i),
        mu_p=mu,
        c_int=c,
        viability=viability(c, params.C_th, params.n),
        capacity=capacity_closed_form(mu, tau),
    )


def evaluate_point(
    params: SystemParameters,
    value: float,
    parameter: str,
    impulse: ImpulseResponse | None = None,
    settings: SimulationSettings | None = None,
    tau: float | None = None,
) -> SweepPoint:
    """One (value, P_i, mu_p, C_int, V, C) tuple with ``parameter`` set to ``value``.

    A supplied ``impulse`` must have been simulated with the intervened rates;
    for a lambda intervention the default-rate response is reused as is.
    """
    if parameter not in INTERVENABLE:
        raise ValueError(f"unknown intervention parameter {parameter!r}")
    if not value > 0 and not (value == 0 and parameter != "lambda"):
        raise ValueError(f"{parameter} must be positive, got {value!r}")
    tau = params.tau if tau is None else tau
    intervened = params.with_value(parameter, value)
    if impulse is None:
        settings = settings or SimulationSettings()
        sim_settings = replace(settings, time_grid=(tau,))
        impulse = simulate_impulse(replace(intervened, tau=tau), sim_settings)
    return _point_from_p_i(value, impulse.probability_at(tau), intervened, tau)


def simulate_family(
    spec: InterventionSpec,
    params: SystemParameters,
    settings: SimulationSettings,
    taus: Sequence[float],
) -> list[ImpulseResponse]:
    """Impulse responses for every grid point of ``spec``, sampled at ``taus``.

    Lambda does not enter the channel physics, so a lambda sweep shares a
    single response; rate interventions are re-simulated per point.
    """
    taus = sorted({float(t) for t in taus})
    horizon = taus[-1]
    values = spec.values()
    if spec.parameter == "lambda":
        shared = simulate_impulse(
            replace(params, tau=horizon),
            replace(settings, time_grid=tuple(taus), seed=point_seed(settings.seed, "lambda", 0)),
        )
        return [shared] * len(values)
    out = []
    for index, value in enumerate(values):
        point_params = replace(params.with_value(spec.parameter, value), tau=horizon)
        point_settings = replace(
            settings, time_grid=tuple(taus), seed=point_seed(settings.seed, spec.parameter, index)
        )
        out.append(simulate_impulse(point_params, point_settings))
    return out


def curve_from_impulses(
    spec: InterventionSpec,
    params: SystemParameters,
    impulses: Sequence[ImpulseResponse],
    tau: float,
) -> SweepCurve:
    values = spec.values()
    if len(impulses) != len(values):
        raise ValueError("one impulse response per grid point is required")
    points = tuple(
        _point_from_p_i(v, imp.probability_at(tau), params.with_value(spec.parameter, v), tau)
        for v, imp in zip(values, impulses)
    )
    return SweepCurve(spec=spec, points=points, tau=float(tau))


def sweep(
    spec: InterventionSpec, params: SystemParameters, settings: SimulationSettings
) -> SweepCurve:
    impulses = simulate_family(spec, params, settings, [params.tau])
    return curve_from_impulses(spec, params, impulses, params.tau)


def extract_semantic_information(
    curve: SweepCurve, epsilon: float, *, interpolate: bool = False
) -> SemanticResult:
    """Minimum capacity over points with V <= min V + epsilon.

    Ties in capacity go to the point nearest the high-viability end of the
    range (the smallest intervention). With ``interpolate`` the critical
    value is refined by linear interpolation of V between the critical
    point and its neighbour, at V = min V + epsilon.
    """
    points = curve.points
    if not points:
        raise ValueError("cannot extract semantic information from an empty curve")
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon!r}")
    v = np.array([p.viability for p in points])
    c = np.array([p.capacity for p in points])
    x = np.array([p.value for p in points])

    v_min = float(v.min())
    threshold = v_min + epsilon
    admissible = np.flatnonzero(v <= threshold)
    s_eps = float(c[admissible].min())
    ties = admissible[c[admissible] == s_eps]
    high_end_first = v[0] >= v[-1]
    crit_idx = int(ties.min() if high_end_first else ties.max())
    critical = float(x[crit_idx])

    neighbour = crit_idx - 1 if high_end_first else crit_idx + 1
    uncertainty = 0.0
    if 0 <= neighbour < len(points):
        uncertainty = float(abs(x[neighbour] - x[crit_idx]))
        if interpolate and v[neighbour] > threshold and v[neighbour] != v[crit_idx]:
            frac = (threshold - v[crit_idx]) / (v[neighbour] - v[crit_idx])
            critical = float(x[crit_idx] + frac * (x[neighbour] - x[crit_idx]))

    excess = admissible[c[admissible] > s_eps]
    meaningless = (float(x[excess].min()), float(x[excess].max())) if excess.size else None
    return SemanticResult(
        s_epsilon=s_eps,
        critical_value=critical,
        admissible_set_size=int(admissible.size),
        v_min=v_min,
        meaningless_range=meaningless,
        epsilon=float(epsilon),
        critical_uncertainty=uncertainty,
    )


def temporal_from_impulses(
    spec: InterventionSpec,
    params: SystemParameters,
    impulses: Sequence[ImpulseResponse],
    tau_grid: Sequence[float],
    epsilon: float | None = None,
) -> list[tuple[float, SemanticResult]]:
    epsilon = params.epsilon if epsilon is None else epsilon
    horizon = impulses[0].times[-1]
    out = []
    for tau in tau_grid:
        if tau > horizon * (1 + 1e-12):
            raise ValueError(f"tau={tau!r} lies beyond the simulated horizon {horizon!r}")
        curve = curve_from_impulses(spec, params, impulses, float(tau))
        out.append((float(tau), extract_semantic_information(curve, epsilon)))
    return out


def temporal_profile(
    specs: Sequence[InterventionSpec],
    params: SystemParameters,
    settings: SimulationSettings,
    tau_grid: Sequence[float],
) -> dict[str, list[tuple[float, float]]]:
    """S_eps(tau) per intervention; each family is simulated once up to max(tau_grid)."""
    if len(tau_grid) == 0:
        raise ValueError("tau_grid must be non-empty")
    profile = {}
    for spec in specs:
        impulses = simulate_family(spec, params, settings, tau_grid)
        rows = temporal_from_impulses(spec, params, impulses, tau_grid)
        profile[spec.parameter] = [(tau, res.s_epsilon) for tau, res in rows]
    return profile

