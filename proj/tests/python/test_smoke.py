# Copyright 2026 The dsest Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoke tests for the dsest Python bindings."""

import math

import pytest

import dsest

REF = dsest.ModelParams(3, 0.5, 1.0)


def test_moments_and_fidelity_extremes():
    m = dsest.compute_moments(REF)
    assert m.alpha == pytest.approx(3.0)
    assert m.beta == pytest.approx(2.0 * math.sqrt(0.5) + 0.5)
    assert dsest.d_min(REF) < dsest.d_max(REF)
    assert dsest.d_min_limit(REF) == pytest.approx(0.8284271247461902)


def test_distributed_and_ceo_sum_rates():
    dist = dsest.to_bits(dsest.distributed_sum_rate(REF, 6.0))
    ceo = dsest.to_bits(dsest.ceo_sum_rate(REF, 6.0))
    assert dist == pytest.approx(0.5560756729827788, rel=1e-12)
    assert ceo == pytest.approx(0.78812042754156, rel=1e-12)
    rates = dsest.distributed_rates(REF, 6.0)
    assert sum(rates) == pytest.approx(dsest.distributed_sum_rate(REF, 6.0))
    assert dsest.compare_protocols(REF, 6.0).gap > 0.0


def test_distortion_round_trip():
    d = dsest.achievable_distortion(REF, 6.0)
    assert d == pytest.approx(0.6655414900351417, rel=1e-12)
    assert dsest.sigma_q2_for_distortion(REF, d) == pytest.approx(6.0)


def test_joint_covariance_shape():
    cov = dsest.joint_covariance(REF, 6.0)
    assert cov.shape == (7, 7)
    assert cov[0, 0] == pytest.approx(1.0)


def test_outer_bounds_below_achievable():
    c = dsest.calibrate_at_sigma_q2(REF, 6.0)
    assert dsest.rate_outer_bound(REF, c) <= dsest.distributed_rates(REF, 6.0)[0]
    assert dsest.leakage_outer_bound(REF, c) <= dsest.leakage_exact(REF, 6.0) + 1e-9


def test_evaluate_point_optional_fields():
    p = dsest.evaluate_point(REF, 0.0)
    assert p.r_sum_dist is None
    assert p.leakage_exact == pytest.approx(0.5 * math.log(1.0 / p.d_min))


def test_simulation_is_deterministic():
    a = dsest.simulate(REF, 6.0, n=5000, seed=7)
    b = dsest.simulate(REF, 6.0, n=5000, seed=7)
    assert a.d_hat == b.d_hat
    assert abs(a.d_hat - dsest.achievable_distortion(REF, 6.0)) < 0.05


def test_validation_small_grid_passes():
    suites = dsest.run_validation("small", mc_samples=20000)
    assert len(suites) >= 6
    assert all(s.passed for s in suites)


def test_errors_are_typed():
    with pytest.raises(dsest.InvalidArgumentError):
        dsest.ModelParams(1, 0.5, 1.0)
    with pytest.raises(dsest.InfeasibleError):
        dsest.sigma_q2_for_distortion(REF, 0.1)
    with pytest.raises(dsest.DsestError):
        dsest.distributed_rates(REF, 0.0)
