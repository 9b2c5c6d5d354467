import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semantic_dds.pic_information import (
    BRUTEFORCE_MAX_N,
    ChannelPoint,
    binary_entropy,
    binomial_output_pmf,
    capacity_bruteforce,
    capacity_closed_form,
    crossover_probability,
    mutual_information_bruteforce,
    mutual_information_z,
    mutual_information_z_derivative,
    optimal_input,
    optimal_input_full,
)
from semantic_dds.validation import grid_argmax_z

probs = st.floats(0.0, 1.0)
open_probs = st.floats(1e-6, 1 - 1e-6)


# reference values below were evaluated with mpmath at 30 digits


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.499915958164528, rel=1e-13)
    with pytest.raises(ValueError):
        binary_entropy(1.2)


def test_crossover_probability():
    assert crossover_probability(0.0025, 20) == pytest.approx(0.951169875253166, rel=1e-13)
    assert crossover_probability(0.00144, 58) == pytest.approx(0.919817321546840, rel=1e-13)
    assert crossover_probability(0.3, 0) == 1.0
    assert crossover_probability(1.0, 5) == 0.0
    assert crossover_probability(0.0, 5) == 1.0
    # stays finite and positive where the naive power underflows to 0 slowly
    assert crossover_probability(1e-12, 10**6) == pytest.approx(math.exp(-1e-6), rel=1e-12)
    for bad in [(-0.1, 3), (0.5, -1), (0.5, 2.5)]:
        with pytest.raises(ValueError):
            crossover_probability(*bad)


def test_channel_point_computes_mu():
    point = ChannelPoint(0.1, 3, 0.02)
    assert point.mu_p == pytest.approx(0.729)
    with pytest.raises(ValueError):
        ChannelPoint(0.1, 3, 0.0)


def test_binomial_pmf_sums_to_one():
    point = ChannelPoint(0.3, 12, 1.0)
    pmf = binomial_output_pmf(1.0, point)
    assert pmf.shape == (13,)
    assert pmf.sum() == pytest.approx(1.0)
    silent = binomial_output_pmf(0.0, point)
    assert silent[0] == 1.0 and silent[1:].sum() == 0.0


def test_capacity_reference_values():
    assert capacity_closed_form(0.5, 0.02) == pytest.approx(16.0964047443681, rel=1e-12)
    assert capacity_closed_form(0.0, 0.02) == pytest.approx(50.0)
    assert capacity_closed_form(1.0, 0.02) == 0.0
    with pytest.raises(ValueError):
        capacity_closed_form(0.5, 0.0)


def test_optimal_input_reference_values():
    assert optimal_input(0.5) == pytest.approx(0.4, abs=1e-14)
    assert optimal_input(0.0) == pytest.approx(0.5, abs=1e-14)
    assert optimal_input(0.99) == pytest.approx(0.368367673186436, rel=1e-12)
    with pytest.raises(ValueError):
        optimal_input(1.0)


def test_optimal_input_full_dead_channel():
    res = optimal_input_full(1.0, 0.02)
    assert math.isnan(res.p1_star) and res.capacity == 0.0


def test_optimal_input_matches_grid_search():
    for mu in (0.0, 0.2, 0.7, 0.95):
        assert abs(optimal_input(mu) - grid_argmax_z(mu, step=1e-5)) <= 1e-4


def test_bruteforce_matches_z_channel_on_sample():
    for n in (1, 5, 30):
        for p_i in (0.05, 0.5, 0.95):
            point = ChannelPoint(p_i, n, 1.0)
            for p1 in (0.1, 0.5, 0.9):
                assert mutual_information_bruteforce(p1, point) == pytest.approx(
                    mutual_information_z(p1, point.mu_p), abs=1e-10
                )


def test_capacity_bruteforce_matches_closed_form_on_sample():
    for n, p_i in [(1, 0.05), (10, 0.2), (30, 0.95)]:
        point = ChannelPoint(p_i, n, 0.02)
        assert capacity_bruteforce(point) == pytest.approx(capacity_closed_form(point.mu_p, 0.02), abs=1e-6)


def test_bruteforce_size_guard():
    with pytest.raises(ValueError, match="N <="):
        capacity_bruteforce(ChannelPoint(0.1, BRUTEFORCE_MAX_N + 1, 1.0))


@given(open_probs, probs)
def test_mutual_information_bounds(p1, mu):
    info = mutual_information_z(p1, mu)
    assert -1e-12 <= info <= 1.0 + 1e-12
    assert info <= capacity_closed_form(mu, 1.0) + 1e-9


@given(st.floats(0.0, 0.999))
def test_optimal_input_is_stationary_and_bounded(mu):
    p = optimal_input(mu)
    assert 1 / math.e - 1e-9 <= p <= 0.5 + 1e-12
    assert abs(mutual_information_z_derivative(p, mu)) <= 1e-8
    assert mutual_information_z(p, mu) == pytest.approx(capacity_closed_form(mu, 1.0), abs=1e-12)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_capacity_non_increasing_in_crossover(m1, m2):
    lo, hi = sorted((m1, m2))
    assert capacity_closed_form(hi, 1.0) <= capacity_closed_form(lo, 1.0) + 1e-12


@given(st.integers(1, 40), st.floats(0.01, 0.99), probs)
def test_bruteforce_equivalence_property(n, p_i, p1):
    point = ChannelPoint(p_i, n, 1.0)
    assert mutual_information_bruteforce(p1, point) == pytest.approx(
        mutual_information_z(p1, point.mu_p), abs=1e-9
    )


@given(st.floats(0.0, 1.0), st.integers(0, 200), st.integers(0, 200))
def test_crossover_monotone_in_particles(p_i, n1, n2):
    lo, hi = sorted((n1, n2))
    assert crossover_probability(p_i, hi) <= crossover_probability(p_i, lo)
