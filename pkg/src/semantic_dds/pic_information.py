"""Binary-input particle intensity channel: Z-channel reduction and capacity.

With release probability p in {0, 1}, the count of internalised particles
out of N released is Binomial(N, p * P_i). Only "zero received" versus
"some received" matters, so the channel collapses to a Z channel whose
1 -> 0 crossover is mu_p = (1 - P_i)^N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy
from scipy.stats import binom

__all__ = [
    "ChannelPoint",
    "OptimalInput",
    "binary_entropy",
    "binomial_output_pmf",
    "crossover_probability",
    "mutual_information_z",
    "mutual_information_z_derivative",
    "optimal_input",
    "optimal_input_full",
    "capacity_closed_form",
    "mutual_information_bruteforce",
    "capacity_bruteforce",
    "BRUTEFORCE_MAX_N",
]

BRUTEFORCE_MAX_N = 64


def _check_probability(name, q):
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {q!r}")


def binary_entropy(q: float) -> float:
    """H2(q) in bits, with 0 log 0 = 0."""
    _check_probability("q", q)
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def crossover_probability(p_i: float, n_particles: int) -> float:
    """mu_p = (1 - P_i)^N, evaluated in the log domain."""
    _check_probability("p_i", p_i)
    if n_particles < 0 or int(n_particles) != n_particles:
        raise ValueError(f"n_particles must be a non-negative integer, got {n_particles!r}")
    if n_particles == 0:
        return 1.0
    if p_i == 1.0:
        return 0.0
    return math.exp(n_particles * math.log1p(-p_i))


@dataclass(frozen=True)
class ChannelPoint:
    p_i: float
    n_particles: int
    tau: float
    mu_p: float = float("nan")

    def __post_init__(self):
        object.__setattr__(self, "mu_p", crossover_probability(self.p_i, self.n_particles))
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")


@dataclass(frozen=True)
class OptimalInput:
    p1_star: float
    capacity: float
    mutual_info_bits: float


def binomial_output_pmf(p: float, point: ChannelPoint) -> np.ndarray:
    """P(Y = y | X = p) for y = 0..N."""
    _check_probability("p", p)
    return binom.pmf(np.arange(point.n_particles + 1), point.n_particles, p * point.p_i)


def mutual_information_z(p1: float, mu_p: float) -> float:
    """I(X;Y) = H2(p1 (1 - mu_p)) - p1 H2(mu_p) in bits per channel use."""
    _check_probability("p1", p1)
    _check_probability("mu_p", mu_p)
    return binary_entropy(p1 * (1.0 - mu_p)) - p1 * binary_entropy(mu_p)


def mutual_information_z_derivative(p1: float, mu_p: float) -> float:
    """dI/dp1 of the Z-channel mutual information, for p1 in (0, 1) and mu_p < 1."""
    s = p1 * (1.0 - mu_p)
    return (1.0 - mu_p) * math.log2((1.0 - s) / s) - binary_entropy(mu_p)


def optimal_input(mu_p: float) -> float:
    """Capacity-achieving release probability p1* of the Z channel."""
    _check_probability("mu_p", mu_p)
    if mu_p == 1.0:
        raise ValueError("mu_p = 1: the channel carries no information, p1* is undefined")
    one_minus = 1.0 - mu_p
    exponent = math.log(2.0) * binary_entropy(mu_p) / one_minus
    # (1/(1-mu)) / (1 + 2^(H2/(1-mu))) without overflowing the power
    return math.exp(-math.log(one_minus) - np.logaddexp(0.0, exponent))


def capacity_closed_form(mu_p: float, tau: float) -> float:
    """Z-channel capacity in bit/s: log2(1 + (1 - mu) mu^(mu/(1 - mu))) / tau."""
    _check_probability("mu_p", mu_p)
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    if mu_p == 1.0:
        return 0.0
    if mu_p == 0.0:
        power = 1.0  # 0^0
    else:
        power = math.exp(mu_p / (1.0 - mu_p) * math.log(mu_p))
    return math.log2(1.0 + (1.0 - mu_p) * power) / tau


def optimal_input_full(mu_p: float, tau: float) -> OptimalInput:
    if mu_p == 1.0:
        return OptimalInput(p1_star=float("nan"), capacity=0.0, mutual_info_bits=0.0)
    p1 = optimal_input(mu_p)
    info = mutual_information_z(p1, mu_p)
    return OptimalInput(p1_star=p1, capacity=info / tau, mutual_info_bits=info)


# --- exhaustive oracles -----------------------------------------------------


def _conditional_pmfs(point: ChannelPoint):
    if point.n_particles > BRUTEFORCE_MAX_N:
        raise ValueError(
            f"exhaustive evaluation limited to N <= {BRUTEFORCE_MAX_N}, got N={point.n_particles}"
        )
    silent = binomial_output_pmf(0.0, point)
    release = binomial_output_pmf(1.0, point)
    return silent, release


def _mi_from_pmfs(p1, silent, release):
    """Vectorised I(X;Y) over an array of input weights p1, from the joint law."""
    p1 = np.atleast_1d(np.asarray(p1, dtype=float))[:, None]
    joint1 = p1 * release
    joint0 = (1.0 - p1) * silent
    out = joint0 + joint1
    # sum_x,y p(x,y) log2 p(y|x)/p(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = xlogy(joint1, release) - xlogy(joint1, out)
        t0 = xlogy(joint0, silent) - xlogy(joint0, out)
    return (t1.sum(axis=1) + t0.sum(axis=1)) / math.log(2.0)


def mutual_information_bruteforce(p1: float, point: ChannelPoint) -> float:
    """I(X;Y) of the full binomial channel with binary input weighted (1 - p1, p1)."""
    _check_probability("p1", p1)
    silent, release = _conditional_pmfs(point)
    return float(_mi_from_pmfs(p1, silent, release)[0])


def capacity_bruteforce(point: ChannelPoint, step: float = 1e-5) -> float:
    """Grid search over p1 refined by ternary search; bit/s."""
    silent, release = _conditional_pmfs(point)
    grid = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    values = _mi_from_pmfs(grid, silent, release)
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]

    def f(x):
        return float(_mi_from_pmfs(x, silent, release)[0])

    for _ in range(100):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
    refined = max(f(0.5 * (lo + hi)), float(values[best]))
    return max(refined, 0.0) / point.tau
