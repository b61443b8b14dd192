"""Invariant checks that back the simulator's headline guarantees.

Kept self-contained so the file can run standalone:

    pytest tests/test_properties.py
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavgrid.connectivity import ScenarioConfig, conditional_connectivity, estimate_distribution
from uavgrid.geometry import PRESETS, NetworkRealization, RadioParams, ground_range, sample_realization
from uavgrid.los import LinkGeometry, Placement, los_probability

URBAN = PRESETS["urban"]
CITIES = list(PRESETS.values())

_finite = dict(allow_nan=False, allow_infinity=False)
link_d = st.floats(min_value=0.0, max_value=500.0, **_finite)
link_phi = st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True, **_finite)
link_h = st.floats(min_value=10.001, max_value=400.0, **_finite)
city_idx = st.integers(min_value=0, max_value=2)


@given(d=link_d, phi=link_phi, h=link_h, ci=city_idx)
@settings(max_examples=200, deadline=None)
def test_probability_in_unit_interval(d, phi, h, ci):
    lk = LinkGeometry(d=d, phi=phi, h_uav=h, h_v=10.0)
    for pl in (Placement.INTERSECTION, Placement.STREET):
        p = los_probability(lk, CITIES[ci], pl)
        assert 0.0 <= p <= 1.0


@given(d=link_d, phi=link_phi, h=link_h, ci=city_idx)
@settings(max_examples=200, deadline=None)
def test_intersection_dominates_street(d, phi, h, ci):
    # mid-block vehicles face strictly more exposed building fronts
    lk = LinkGeometry(d=d, phi=phi, h_uav=h, h_v=10.0)
    city = CITIES[ci]
    assert los_probability(lk, city, Placement.STREET) <= los_probability(lk, city, Placement.INTERSECTION)


@given(d=link_d, phi=link_phi, h=link_h, ci=city_idx)
@settings(max_examples=200, deadline=None)
def test_quadrant_fold_symmetry(d, phi, h, ci):
    city = CITIES[ci]
    base = los_probability(LinkGeometry(d=d, phi=phi, h_uav=h, h_v=10.0), city, Placement.INTERSECTION)
    for other in (math.pi - phi, math.pi + phi, -phi):
        p = los_probability(LinkGeometry(d=d, phi=other, h_uav=h, h_v=10.0), city, Placement.INTERSECTION)
        assert p == pytest.approx(base, rel=1e-9, abs=1e-12)


def test_monotone_in_distance_1000_pairs():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        city = CITIES[rng.integers(3)]
        phi = rng.uniform(0.0, 2.0 * math.pi)
        h = rng.uniform(10.5, 300.0)
        d1, d2 = np.sort(rng.uniform(0.0, 400.0, 2))
        pl = Placement.INTERSECTION if rng.integers(2) else Placement.STREET
        p1 = los_probability(LinkGeometry(d=float(d1), phi=phi, h_uav=h, h_v=10.0), city, pl)
        p2 = los_probability(LinkGeometry(d=float(d2), phi=phi, h_uav=h, h_v=10.0), city, pl)
        assert p2 <= p1 + 1e-12


def test_monotone_in_altitude_1000_pairs():
    rng = np.random.default_rng(202)
    for _ in range(1000):
        city = CITIES[rng.integers(3)]
        phi = rng.uniform(0.0, 2.0 * math.pi)
        d = rng.uniform(0.0, 400.0)
        h1, h2 = np.sort(rng.uniform(10.5, 400.0, 2))
        pl = Placement.INTERSECTION if rng.integers(2) else Placement.STREET
        p1 = los_probability(LinkGeometry(d=d, phi=phi, h_uav=float(h1), h_v=10.0), city, pl)
        p2 = los_probability(LinkGeometry(d=d, phi=phi, h_uav=float(h2), h_v=10.0), city, pl)
        assert p2 >= p1 - 1e-12


def test_empty_realization_scores_zero():
    real = NetworkRealization(d=np.empty(0), phi=np.empty(0))
    radio = RadioParams(r_max=250.0, h_uav=100.0, h_v=10.0, lambda_uav=1e-5)
    for pl in (Placement.INTERSECTION, Placement.STREET):
        assert conditional_connectivity(real, URBAN, radio, pl) == 0.0


def test_two_uav_union_rule():
    radio = RadioParams(r_max=250.0, h_uav=100.0, h_v=10.0, lambda_uav=1e-5)
    pairs = [(120.0, 0.8), (200.0, 2.2)]
    real = NetworkRealization(d=np.array([p[0] for p in pairs]), phi=np.array([p[1] for p in pairs]))
    ps = [los_probability(LinkGeometry(d=d, phi=phi, h_uav=100.0, h_v=10.0), URBAN, Placement.STREET)
          for d, phi in pairs]
    want = 1.0 - (1.0 - ps[0]) * (1.0 - ps[1])
    assert conditional_connectivity(real, URBAN, radio, Placement.STREET) == pytest.approx(want, rel=1e-15)


def test_poisson_count_statistic():
    radio = RadioParams(r_max=250.0, h_uav=100.0, h_v=10.0, lambda_uav=20e-6)
    rng = np.random.default_rng(99)
    n = 20_000
    mean = radio.lambda_uav * math.pi * ground_range(radio) ** 2
    counts = [len(sample_realization(radio, rng)) for _ in range(n)]
    assert abs(np.mean(counts) - mean) < 3.0 * math.sqrt(mean / n)


def test_worker_invariance_is_byte_exact():
    radio = RadioParams(r_max=250.0, h_uav=100.0, h_v=10.0, lambda_uav=20e-6)
    a = estimate_distribution(ScenarioConfig(city=URBAN, radio=radio, n_realizations=1500, seed=31))
    b = estimate_distribution(ScenarioConfig(city=URBAN, radio=radio, n_realizations=1500, seed=31,
                                             workers=2, chunk_size=191))
    for pl in a:
        assert np.array_equal(a[pl].samples, b[pl].samples)
