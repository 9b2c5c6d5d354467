from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exhaustive_semantic, synthetic_curve
from semantic_dds.interventions import (
    DEFAULT_INTERVENTIONS,
    InterventionSpec,
    SweepCurve,
    SweepPoint,
    curve_from_impulses,
    evaluate_point,
    extract_semantic_information,
    point_seed,
    simulate_family,
    sweep,
    temporal_from_impulses,
    temporal_profile,
)
from semantic_dds.pharmacodynamics import viability
from semantic_dds.pic_information import capacity_closed_form, crossover_probability
from semantic_dds.reactive_channel import SimulationSettings, SystemParameters


def _curve(values, v, c):
    spec = InterventionSpec("k_d", 1.0, 2.0, grid_points=max(len(values), 2))
    pts = tuple(SweepPoint(x, 0.0, 0.0, 0.0, vi, ci) for x, vi, ci in zip(values, v, c))
    return SweepCurve(spec, pts, 0.02)


def test_spec_validation():
    with pytest.raises(ValueError):
        InterventionSpec("D", 1.0, 2.0)
    with pytest.raises(ValueError):
        InterventionSpec("k_d", 2.0, 1.0)
    with pytest.raises(ValueError):
        InterventionSpec("k_d", 1.0, 2.0, grid_points=1)
    with pytest.raises(ValueError):
        InterventionSpec("k_f", 0.0, 1.0, scale="log")
    spec = InterventionSpec("k_f", 1e-14, 4e-14, grid_points=3, scale="log")
    np.testing.assert_allclose(spec.values(), [1e-14, 2e-14, 4e-14])


def test_extraction_hand_example():
    # V falls along the sweep, capacity first rises then dips on the plateau
    curve = _curve([1, 2, 3, 4, 5], [0.9, 0.2, 0.005, 0.001, 0.0], [1.0, 2.0, 3.0, 2.5, 4.0])
    r = extract_semantic_information(curve, 0.01)
    assert r.v_min == 0.0
    assert r.admissible_set_size == 3
    assert r.s_epsilon == 2.5
    assert r.critical_value == 4
    assert r.meaningless_range == (3, 5)
    assert r.critical_uncertainty == 1


def test_extraction_single_admissible_point():
    r = extract_semantic_information(_curve([1, 2, 3], [0.9, 0.5, 0.1], [1, 2, 3]), 0.01)
    assert (r.s_epsilon, r.critical_value, r.admissible_set_size, r.meaningless_range) == (3, 3, 1, None)


def test_extraction_ties_prefer_high_viability_end():
    r = extract_semantic_information(_curve([1, 2, 3, 4], [0.5, 0.0, 0.0, 0.0], [1, 2, 2, 2]), 0.01)
    assert r.critical_value == 2 and r.meaningless_range is None
    # reversed orientation: viability rises along the sweep
    r = extract_semantic_information(_curve([1, 2, 3, 4], [0.0, 0.0, 0.0, 0.5], [2, 2, 2, 1]), 0.01)
    assert r.critical_value == 3


def test_extraction_interpolated_critical_value():
    r = extract_semantic_information(_curve([1, 2, 3], [1.0, 0.51, 0.0], [1, 2, 3]), 0.5, interpolate=True)
    # only the last point is admissible; V crosses 0.5 just above it
    assert r.s_epsilon == 3
    assert r.critical_value == pytest.approx(3 - 0.5 / 0.51)


def test_extraction_rejects_bad_input():
    with pytest.raises(ValueError):
        extract_semantic_information(_curve([], [], []), 0.01)
    with pytest.raises(ValueError):
        extract_semantic_information(_curve([1, 2], [1, 0], [1, 2]), -0.1)


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.0, 1e-2, 0.1, 0.5]))
def test_extraction_matches_exhaustive_oracle(seed, eps):
    curve = synthetic_curve(np.random.default_rng(seed))
    r = extract_semantic_information(curve, eps)
    s, crit, count = exhaustive_semantic(
        [p.value for p in curve.points], [p.viability for p in curve.points],
        [p.capacity for p in curve.points], eps,
    )
    assert (r.s_epsilon, r.critical_value, r.admissible_set_size) == (s, crit, count)


@given(st.integers(0, 2**32 - 1), st.floats(0, 0.3), st.floats(0, 0.3))
def test_larger_epsilon_never_raises_s_eps(seed, e1, e2):
    curve = synthetic_curve(np.random.default_rng(seed))
    lo, hi = sorted((e1, e2))
    a = extract_semantic_information(curve, lo)
    b = extract_semantic_information(curve, hi)
    assert b.s_epsilon <= a.s_epsilon
    assert b.admissible_set_size >= a.admissible_set_size


def test_point_seed_properties():
    assert point_seed(1, "k_d", 3) == point_seed(1, "k_d", 3)
    seeds = {point_seed(1, p, i) for p in ("lambda", "k_d", "k_f", "k_b", "k_i") for i in range(61)}
    assert len(seeds) == 5 * 61
    assert point_seed(1, "k_d", 0) != point_seed(2, "k_d", 0)


def test_evaluate_point_consistent_chain(small_settings):
    params = SystemParameters()
    pt = evaluate_point(params, 2000.0, "lambda", settings=small_settings)
    assert pt.mu_p == pytest.approx(crossover_probability(pt.p_i, 40))
    assert pt.c_int == pytest.approx(40 * pt.p_i)
    assert pt.viability == pytest.approx(viability(pt.c_int, params.C_th, params.n))
    assert pt.capacity == pytest.approx(capacity_closed_form(pt.mu_p, params.tau))
    with pytest.raises(ValueError):
        evaluate_point(params, -1.0, "k_d", settings=small_settings)
    with pytest.raises(ValueError):
        evaluate_point(params, 1.0, "D", settings=small_settings)


def test_evaluate_point_zero_forward_rate(small_settings):
    pt = evaluate_point(SystemParameters(), 0.0, "k_f", settings=small_settings)
    assert pt.p_i == 0 and pt.viability == 1.0 and pt.capacity == 0.0


def test_lambda_family_shares_one_response(small_settings):
    spec = InterventionSpec("lambda", 1000.0, 4000.0, grid_points=7)
    impulses = simulate_family(spec, SystemParameters(), small_settings, [0.02])
    assert all(imp is impulses[0] for imp in impulses)
    curve = curve_from_impulses(spec, SystemParameters(), impulses, 0.02)
    v, c = curve.column("viability"), curve.column("capacity")
    assert np.all(np.diff(v) <= 0) and np.all(np.diff(c) >= 0)
    with pytest.raises(ValueError):
        curve_from_impulses(spec, SystemParameters(), impulses[:3], 0.02)


def test_sweep_rate_family_and_temporal(small_settings):
    spec = InterventionSpec("k_d", 1000.0, 20000.0, grid_points=5)
    params = SystemParameters()
    curve = sweep(spec, params, small_settings)
    assert len(curve.points) == 5 and curve.tau == params.tau
    assert curve.column("p_i")[0] > curve.column("p_i")[-1]

    taus = [0.012, 0.016, 0.02]
    impulses = simulate_family(spec, params, small_settings, taus)
    rows = temporal_from_impulses(spec, params, impulses, taus)
    assert [t for t, _ in rows] == taus
    # the sweep at tau and the temporal profile at tau come from the same responses
    assert rows[-1][1] == extract_semantic_information(
        curve_from_impulses(spec, params, impulses, 0.02), params.epsilon
    )
    with pytest.raises(ValueError):
        temporal_from_impulses(spec, params, impulses, [0.03])
    profile = temporal_profile([spec], params, small_settings, taus)
    assert [s for _, s in profile["k_d"]] == [r.s_epsilon for _, r in rows]
    with pytest.raises(ValueError):
        temporal_profile([spec], params, small_settings, [])


def test_default_interventions_cover_all_parameters():
    assert [s.parameter for s in DEFAULT_INTERVENTIONS] == ["lambda", "k_d", "k_f", "k_b", "k_i"]
    for s in DEFAULT_INTERVENTIONS:
        default = SystemParameters().get(s.parameter)
        assert s.range_min <= default <= s.range_max


def test_three_point_reference_example():
    curve = _curve([1, 2, 3], [0.9, 0.05, 0.04], [1.0, 2.5, 3.0])
    r = extract_semantic_information(curve, 0.01)
    assert (r.s_epsilon, r.admissible_set_size, r.critical_value) == (2.5, 2, 2)
    assert r.meaningless_range == (3, 3)
    r0 = extract_semantic_information(curve, 0.0)
    assert (r0.s_epsilon, r0.admissible_set_size) == (3.0, 1)


def test_single_point_curve():
    r = extract_semantic_information(_curve([7.0], [0.3], [1.5]), 0.01)
    assert (r.s_epsilon, r.critical_value, r.admissible_set_size) == (1.5, 7.0, 1)


@given(st.integers(0, 2**32 - 1), st.floats(0, 0.5))
def test_critical_point_is_admissible(seed, eps):
    curve = synthetic_curve(np.random.default_rng(seed))
    r = extract_semantic_information(curve, eps)
    crit = next(p for p in curve.points if p.value == r.critical_value)
    assert crit.viability <= r.v_min + eps
    assert crit.capacity == r.s_epsilon
    assert r.admissible_set_size >= 1


def test_two_point_sweep(small_settings):
    curve = sweep(InterventionSpec("k_b", 5000.0, 20000.0, grid_points=2), SystemParameters(), small_settings)
    assert len(curve.points) == 2


def test_zero_forward_rate_is_a_dead_channel(small_settings):
    pt = evaluate_point(SystemParameters(), 0.0, "k_f", settings=small_settings)
    assert (pt.viability, pt.mu_p, pt.capacity) == (1.0, 1.0, 0.0)


def test_default_point_golden_value():
    # recorded from the oracle-validated build: default seed, 1e5 trials, dt = 1e-6
    pt = evaluate_point(SystemParameters(), 1000.0, "lambda", settings=SimulationSettings())
    assert pt.p_i == 0.00158
    assert pt.mu_p == pytest.approx(0.9688698495263626, rel=1e-12)
    assert 0 < pt.viability < 1
    assert pt.viability == pytest.approx(0.989935833160366, rel=1e-12)
    assert pt.capacity == pytest.approx(0.8343500574524111, rel=1e-12)


def test_degradation_sweep_viability_rises(small_settings):
    settings = replace(small_settings, trials=20_000)
    curve = sweep(InterventionSpec("k_d", 1000.0, 20000.0, grid_points=4), SystemParameters(), settings)
    v = curve.column("viability")
    assert v[-1] > v[0]
    # noise band: neighbouring points may swap only slightly
    assert np.all(np.diff(v) >= -0.05)


def test_single_tau_profile(small_settings):
    spec = InterventionSpec("k_i", 1000.0, 5000.0, grid_points=3)
    params = SystemParameters()
    profile = temporal_profile([spec], params, small_settings, [params.tau])
    assert len(profile["k_i"]) == 1
    assert profile["k_i"][0][1] == extract_semantic_information(
        sweep(spec, params, small_settings), params.epsilon
    ).s_epsilon
