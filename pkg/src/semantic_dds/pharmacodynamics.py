"""Dose-response layer: particle budget, internalised dose and Hill viability."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "DoseResponse",
    "ViabilityShift",
    "DeltaViability",
    "particle_budget",
    "internalised_concentration",
    "viability",
    "delta_viability",
    "dose_response",
]


def particle_budget(lam: float, tau: float) -> int:
    """N = floor(lambda * tau)."""
    if not (lam > 0 and tau > 0):
        raise ValueError(f"lambda and tau must be positive, got {lam!r}, {tau!r}")
    # relative guard so that e.g. 1000 * 0.015 is not floored to 14
    return int(math.floor(lam * tau * (1 + 1e-12)))


def internalised_concentration(p_i: float, n_particles: int) -> float:
    if not 0 <= p_i <= 1:
        raise ValueError(f"p_i must lie in [0, 1], got {p_i!r}")
    if n_particles < 0:
        raise ValueError(f"n_particles must be non-negative, got {n_particles!r}")
    return p_i * n_particles


def viability(c_int, c_th: float, n: float):
    """Hill-type viability 1 / (1 + (c_int / c_th)^n); accepts arrays."""
    if not c_th > 0:
        raise ValueError(f"c_th must be positive, got {c_th!r}")
    if not n >= 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    c = np.asarray(c_int, dtype=float)
    if np.any(c < 0):
        raise ValueError("c_int must be non-negative")
    with np.errstate(over="ignore"):
        v = 1.0 / (1.0 + np.power(c / c_th, n))
    return float(v) if v.ndim == 0 else v


class ViabilityShift(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


class DeltaViability(NamedTuple):
    delta: float
    shift: ViabilityShift


def delta_viability(v_actual: float, v_intervened: float, epsilon: float = 1e-2) -> DeltaViability:
    """Signed V_actual - V_intervened; differences within epsilon count as ZERO."""
    for v in (v_actual, v_intervened):
        if not 0 <= v <= 1:
            raise ValueError(f"viabilities must lie in [0, 1], got {v!r}")
    delta = v_actual - v_intervened
    if abs(delta) <= epsilon:
        shift = ViabilityShift.ZERO
    elif delta > 0:
        shift = ViabilityShift.POSITIVE
    else:
        shift = ViabilityShift.NEGATIVE
    return DeltaViability(delta, shift)


@dataclass(frozen=True)
class DoseResponse:
    c_int: float
    viability: float
    n_particles: int
    p_i_at_tau: float


def dose_response(p_i: float, lam: float, tau: float, c_th: float, n: float) -> DoseResponse:
    budget = particle_budget(lam, tau)
    c = internalised_concentration(p_i, budget)
    return DoseResponse(c_int=c, viability=viability(c, c_th, n), n_particles=budget, p_i_at_tau=p_i)
