# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.


"""Matrix Profile and periodicity tests."""

import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invenio_icsdetect.errors import (DegenerateWindowError,
                                      InvalidConfigurationError,
                                      NoPeriodicityError, ShapeMismatchError)
from invenio_icsdetect.profiles import (MpConfig, autocorrelation,
                                        choose_window, estimate_period,
                                        mp_brute, mp_fast, mp_score, top_peaks,
                                        window_max)


def _sine(n, period, seed=0, noise=0.01):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    return np.sin(2 * np.pi * t / period) + noise * rng.standard_normal(n)


def test_config():
    """Test derived and refused configurations."""
    config = MpConfig.for_series(np.arange(100.0), 5)
    assert config.exclusion_radius == 3
    assert config.std_epsilon == pytest.approx(99e-8)
    assert MpConfig.for_series(np.ones(10), 4).std_epsilon == 1e-8

    assert MpConfig(5, 3, 1e-8).validate(12) == (5, 3, 1e-8)
    with pytest.raises(InvalidConfigurationError):
        MpConfig(1, 1, 1e-8).validate(100)
    with pytest.raises(InvalidConfigurationError):
        MpConfig(60, 30, 1e-8).validate(100)
    with pytest.raises(InvalidConfigurationError):
        MpConfig(5, 3, 1e-8).validate(11)
    with pytest.raises(InvalidConfigurationError):
        MpConfig(5, 0, 1e-8).validate(100)
    with pytest.raises(InvalidConfigurationError):
        MpConfig(5, 3, 0.0).validate(100)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
    n=st.integers(min_value=40, max_value=160),
    m=st.integers(min_value=3, max_value=16),
)
def test_fast_matches_brute_force(seed, n, m):
    """Test that both implementations agree on random walks."""
    series = np.cumsum(np.random.default_rng(seed).standard_normal(n))
    config = MpConfig.for_series(series, m)
    brute = mp_brute(series, config)
    fast = mp_fast(series, config)
    assert len(brute.distances) == n - m + 1
    assert np.allclose(fast.distances, brute.distances, atol=1e-6)
    radius = config.exclusion_radius
    index = np.arange(n - m + 1)
    assert np.all(np.abs(fast.neighbor_index - index) > radius)


def test_repeated_pattern_has_low_profile():
    """Test that exact repetitions are at distance zero."""
    pattern = np.random.default_rng(3).standard_normal(20)
    series = np.tile(pattern, 3)
    config = MpConfig.for_series(series, 20, exclusion_radius=10)
    profile = mp_fast(series, config)
    assert profile.distances[0] == pytest.approx(0.0, abs=1e-6)
    assert profile.neighbor_index[0] in (20, 40)


def test_planted_discord():
    """Test that an inserted anomaly has the highest profile."""
    series = _sine(1000, 50)
    series[600:620] = 0.3
    config = MpConfig.for_series(series, 50)
    profile = mp_fast(series, config)
    top = int(np.argmax(profile.distances))
    assert 550 <= top <= 620
    assert top_peaks(profile.distances, 1, 50)[0] <= 620


def test_degenerate_window():
    """Test that constant windows are refused."""
    series = _sine(300, 50)
    series[100:140] = 1.0
    config = MpConfig.for_series(series, 20)
    with pytest.raises(DegenerateWindowError) as excinfo:
        mp_fast(series, config)
    assert excinfo.value.index == 100
    with pytest.raises(DegenerateWindowError):
        mp_brute(series, config)


def test_refused_series():
    """Test non-finite and multi-channel input."""
    series = _sine(200, 50)
    config = MpConfig.for_series(series, 10)
    series[5] = np.nan
    with pytest.raises(InvalidConfigurationError):
        mp_fast(series, config)
    with pytest.raises(ShapeMismatchError):
        mp_brute(np.ones((10, 2)), config)


def test_window_max_and_score():
    """Test the per-frame score."""
    assert window_max([1.0, 5.0, 2.0], 2).tolist() == [1.0, 5.0, 5.0, 2.0]

    series = _sine(400, 50)
    config = MpConfig.for_series(series, 25)
    profile = mp_fast(series, config)
    scores = mp_score([profile, profile])
    assert len(scores) == 400
    assert np.array_equal(scores, window_max(profile.distances, 25))

    other = mp_fast(series, MpConfig.for_series(series, 30))
    with pytest.raises(ShapeMismatchError):
        mp_score([profile, other])
    with pytest.raises(InvalidConfigurationError):
        mp_score([])


def test_top_peaks():
    """Test ranking of raised levels."""
    values = [0.0, 3.0, 3.0, 0.0, 5.0, 5.0, 0.0]
    assert top_peaks(values, 2, 1).tolist() == [4, 1]
    assert top_peaks(values, 2, 3).tolist() == [4]
    assert top_peaks(np.zeros(5), 3, 1).tolist() == []


def test_estimate_period():
    """Test the autocorrelation period of a sine."""
    period = estimate_period(_sine(2000, 100), 2.0)
    assert period.lag == 100
    assert period.seconds == 50.0
    assert period.acf[0] == pytest.approx(1.0)
    assert choose_window(_sine(2000, 100), 2.0) == 100


def test_process_period(normal_trace):
    """Test that the flow of the plant repeats every 150 seconds."""
    period = estimate_period(normal_trace.column('flow'), 2.0)
    assert period.seconds == pytest.approx(150.0, abs=1.0)
    period = estimate_period(normal_trace.column('level1'), 2.0)
    assert period.seconds == pytest.approx(150.0, abs=1.0)


def test_no_periodicity():
    """Test white noise and constant series."""
    noise = np.random.default_rng(7).standard_normal(2000)
    with pytest.raises(NoPeriodicityError):
        estimate_period(noise, 2.0)
    with pytest.raises(NoPeriodicityError):
        autocorrelation(np.ones(50))
    assert len(autocorrelation(noise, max_lag=10)) == 11


@settings(max_examples=20, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
    scale=st.floats(min_value=0.5, max_value=10.0),
    offset=st.floats(min_value=-10.0, max_value=10.0),
    m=st.integers(min_value=4, max_value=12),
)
def test_profile_is_affine_invariant(seed, scale, offset, m):
    """Test that scaling and shifting the series keeps the profile."""
    series = np.cumsum(np.random.default_rng(seed).standard_normal(120))
    moved = scale * series + offset
    for compute in (mp_brute, mp_fast):
        profile = compute(series, MpConfig.for_series(series, m))
        other = compute(moved, MpConfig.for_series(moved, m))
        assert np.allclose(other.distances, profile.distances, rtol=0,
                           atol=1e-6)


@settings(max_examples=20, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
    m=st.integers(min_value=3, max_value=20),
    walk=st.booleans(),
)
def test_profile_distance_bound(seed, m, walk):
    """Test that normalized distances stay within zero and 2 sqrt(m)."""
    series = np.random.default_rng(seed).standard_normal(150)
    if walk:
        series = np.cumsum(series)
    config = MpConfig.for_series(series, m)
    bound = 2.0 * np.sqrt(m)
    fast = mp_fast(series, config).distances
    assert np.all((fast >= 0.0) & (fast <= bound))
    brute = mp_brute(series, config).distances
    assert np.all((brute >= 0.0) & (brute <= bound + 1e-9))


def test_repeated_anomaly_hides_itself():
    """Test that a second identical anomaly lowers the first one's value."""
    anomaly = np.random.default_rng(11).uniform(-2.0, 2.0, 50)
    single = _sine(2000, 50, seed=12)
    single[500:550] = anomaly
    double = single.copy()
    double[1500:1550] = anomaly

    config = MpConfig.for_series(single, 50)
    alone = mp_fast(single, config)
    twice = mp_fast(double, MpConfig.for_series(double, 50))
    assert twice.distances[500] < alone.distances[500]
    assert twice.distances[500] == pytest.approx(0.0, abs=1e-4)
    assert twice.neighbor_index[500] == 1500
    assert alone.distances[500] > 1.0


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(100))
def test_fast_matches_brute_force_long_series(seed):
    """Test both implementations at realistic sizes."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(600, 4001))
    m = int(rng.choice([50, 150, 300]))
    series = np.cumsum(rng.standard_normal(n)) \
        + np.sin(2 * np.pi * np.arange(n) / 300.0)
    config = MpConfig.for_series(series, m)
    brute = mp_brute(series, config)
    fast = mp_fast(series, config)
    assert np.allclose(fast.distances, brute.distances, rtol=0, atol=1e-6)


@pytest.mark.slow
def test_fast_runtime():
    """Test an hour of samples with a period-sized window."""
    series = np.cumsum(np.random.default_rng(2).standard_normal(7200))
    config = MpConfig.for_series(series, 300)
    started = time.perf_counter()
    profile = mp_fast(series, config)
    assert time.perf_counter() - started < 5.0
    assert len(profile.distances) == 6901
