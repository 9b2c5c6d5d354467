"""Oracle comparisons run by ``semantic-dds validate``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import xlogy

from .pharmacodynamics import viability
from .pic_information import (
    ChannelPoint,
    capacity_bruteforce,
    capacity_closed_form,
    mutual_information_bruteforce,
    mutual_information_z,
    mutual_information_z_derivative,
    optimal_input,
)
from .reactive_channel import (
    SimulationSettings,
    SystemParameters,
    eventual_hit_with_degradation,
    hitting_probability_absorbing,
    simulate_impulse,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


P_I_GRID = np.round(np.arange(1, 20) * 0.05, 10)
P1_GRID = np.round(np.arange(1, 10) * 0.1, 10)
MU_GRID = np.round(np.arange(0, 100) * 0.01, 10)


def _h2(q):
    q = np.asarray(q, dtype=float)
    return -(xlogy(q, q) + xlogy(1 - q, 1 - q)) / math.log(2)


def grid_argmax_z(mu: float, step: float = 1e-6) -> float:
    """Argmax over p1 of the Z-channel mutual information by exhaustive grid."""
    p = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)
    values = _h2(p * (1 - mu)) - p * _h2(mu)
    return float(p[np.argmax(values)])


def check_z_equivalence(tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    for n in range(1, 31):
        for p_i in P_I_GRID:
            point = ChannelPoint(float(p_i), n, 1.0)
            for p1 in P1_GRID:
                diff = abs(mutual_information_bruteforce(float(p1), point)
                           - mutual_information_z(float(p1), point.mu_p))
                worst = max(worst, diff)
    return CheckResult("z_equivalence", worst <= tol, f"max |I_binomial - I_Z| = {worst:.3e} bits")


def check_capacity(tau: float = 0.02, tol: float = 1e-6) -> CheckResult:
    worst = 0.0
    for n in range(1, 31):
        for p_i in P_I_GRID:
            point = ChannelPoint(float(p_i), n, tau)
            worst = max(worst, abs(capacity_bruteforce(point) - capacity_closed_form(point.mu_p, tau)))
    return CheckResult("capacity_closed_form", worst <= tol,
                       f"max |C_bruteforce - C_closed| = {worst:.3e} bit/s")


def check_optimal_input(tol_argmax: float = 1e-4, tol_root: float = 1e-8) -> CheckResult:
    worst_arg = 0.0
    worst_root = 0.0
    for mu in MU_GRID:
        p_star = optimal_input(float(mu))
        worst_arg = max(worst_arg, abs(p_star - grid_argmax_z(float(mu))))
        worst_root = max(worst_root, abs(mutual_information_z_derivative(p_star, float(mu))))
    ok = worst_arg <= tol_argmax and worst_root <= tol_root
    return CheckResult("optimal_input", ok,
                       f"max |p1* - argmax| = {worst_arg:.2e}, max |dI/dp1(p1*)| = {worst_root:.2e}")


def check_hill() -> CheckResult:
    ok = (viability(0.05, 0.05, 10) == 0.5 and viability(0.0, 0.05, 10) == 1.0
          and viability(0.1, 0.05, 10) == 1 / 1025)
    return CheckResult("hill_exactness", ok, "V(C_th)=0.5, V(0)=1, V(2 C_th; n=10)=1/1025")


def first_passage_params() -> SystemParameters:
    return SystemParameters(k_d=0.0, D=5e-9, a=0.5e-6, r0=1e-6)


def check_first_passage(settings: SimulationSettings | None = None, t: float = 0.02) -> CheckResult:
    settings = settings or SimulationSettings()
    params = replace(first_passage_params(), tau=t)
    response = simulate_impulse(params, replace(settings, time_grid=(t,)), absorbing=True)
    expected = hitting_probability_absorbing(params.D, params.a, params.r0, t)
    got, se = response.p_i[-1], response.stderr[-1]
    return CheckResult("first_passage_absorbing", abs(got - expected) <= 3 * se,
                       f"P_i({t * 1e3:g} ms) = {got:.5f} +/- {se:.5f}, analytic {expected:.5f}")


def check_degradation_limit(settings: SimulationSettings | None = None, k_d: float = 2e4,
                            horizon: float = 0.005) -> CheckResult:
    settings = settings or SimulationSettings()
    params = replace(first_passage_params(), k_d=k_d, tau=horizon)
    response = simulate_impulse(params, replace(settings, time_grid=(horizon,)), absorbing=True)
    expected = eventual_hit_with_degradation(params.D, params.a, params.r0, k_d)
    got, se = response.p_i[-1], response.stderr[-1]
    return CheckResult("first_passage_with_decay", abs(got - expected) <= 3 * se,
                       f"P_i(inf) = {got:.5f} +/- {se:.5f}, analytic {expected:.5f}")


def run_all(settings: SimulationSettings | None = None) -> list[CheckResult]:
    checks = [
        check_z_equivalence,
        check_capacity,
        check_optimal_input,
        check_hill,
        lambda: check_first_passage(settings),
        lambda: check_degradation_limit(settings),
    ]
    out = []
    for check in checks:
        t0 = time.perf_counter()
        res = check()
        out.append(replace(res, seconds=time.perf_counter() - t0))
    return out
