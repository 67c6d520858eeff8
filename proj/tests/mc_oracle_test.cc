// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsest/mc_oracle.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dsest/errors.h"
#include "dsest/network_model.h"
#include "dsest/protocols.h"

namespace dsest {
namespace {

McConfig Config(std::int64_t n, std::uint64_t seed = 42, int trials = 1) {
  McConfig c;
  c.n = n;
  c.seed = seed;
  c.trials = trials;
  return c;
}

TEST(McConfigTest, Validation) {
  EXPECT_THROW(Config(99).Validate(), InvalidArgumentError);
  EXPECT_THROW(Config(1000, 1, 0).Validate(), InvalidArgumentError);
  EXPECT_NO_THROW(Config(100).Validate());
}

TEST(SimulateTest, DeterministicForFixedSeed) {
  const ModelParams p = ModelParams::Create(3, 0.5, 1.0);
  const McEstimate a = Simulate(p, 6.0, Config(20000, 9, 2));
  const McEstimate b = Simulate(p, 6.0, Config(20000, 9, 2));
  EXPECT_EQ(a.d_hat, b.d_hat);
  EXPECT_EQ(a.d_stderr, b.d_stderr);
  EXPECT_EQ(a.leakage_hat, b.leakage_hat);
  EXPECT_EQ(a.leakage_stderr, b.leakage_stderr);
  EXPECT_EQ(a.rates_hat, b.rates_hat);
  const McEstimate c = Simulate(p, 6.0, Config(20000, 10, 2));
  EXPECT_NE(a.d_hat, c.d_hat);
}

TEST(SimulateTest, DistortionMatchesClosedForm) {
  const ModelParams p = ModelParams::Create(5, 0.5, 1.0);
  const McEstimate e = Simulate(p, 6.0, Config(200000));
  const double d = AchievableDistortion(p, 6.0);
  EXPECT_GT(e.d_hat, 0.0);
  EXPECT_LE(std::abs(e.d_hat - d), 3.0 * e.d_stderr);
  const double l = LeakageExactStructured(p, 6.0);
  EXPECT_LE(std::abs(e.leakage_hat - l),
            std::max(3.0 * e.leakage_stderr, 0.02 * l));
  ASSERT_EQ(e.rates_hat.size(), 5u);
  const std::vector<double> r = DistributedRatesStructured(p, 6.0);
  for (int a = 0; a < 5; ++a) EXPECT_NEAR(e.rates_hat[a], r[a], 0.01);
}

TEST(SimulateTest, ZeroNoiseReachesMinimumDistortion) {
  const ModelParams p = ModelParams::Create(3, 0.5, 1.0);
  const McEstimate e = Simulate(p, 0.0, Config(200000));
  EXPECT_LE(std::abs(e.d_hat - DMin(p)), 3.0 * e.d_stderr);
  EXPECT_NEAR(e.d_hat, 0.6628094, 3.0 * e.d_stderr + 1e-6);
  EXPECT_TRUE(e.rates_hat.empty());
  EXPECT_TRUE(std::isfinite(e.leakage_stderr));
}

TEST(SimulateTest, StandardErrorScalesWithSampleSize) {
  const ModelParams p = ModelParams::Create(3, 0.5, 1.0);
  const McEstimate small = Simulate(p, 6.0, Config(5000, 42, 20));
  const McEstimate large = Simulate(p, 6.0, Config(20000, 42, 20));
  const double ratio = small.d_stderr / large.d_stderr;
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}

TEST(SimulateTest, TrialOrderInvariance) {
  const ModelParams p = ModelParams::Create(3, 1.0, 2.0);
  const McConfig cfg = Config(3000, 77, 4);
  const McEstimate combined = Simulate(p, 1.0, cfg);
  std::vector<McEstimate> per_trial(cfg.trials);
  for (int t = cfg.trials - 1; t >= 0; --t) {
    per_trial[t] = SimulateTrial(p, 1.0, cfg.n, TrialSeed(cfg.seed, t));
  }
  double d = 0.0;
  for (const McEstimate& e : per_trial) d += e.d_hat;
  EXPECT_EQ(combined.d_hat, d / cfg.trials);
  EXPECT_NE(TrialSeed(77, 0), TrialSeed(77, 1));
}

TEST(SimulateTest, RejectsInfiniteNoise) {
  EXPECT_THROW(Simulate(ModelParams::Create(3, 0.5, 1.0),
                        std::numeric_limits<double>::infinity(), Config(1000)),
               InvalidArgumentError);
}

TEST(SimulateTest, SmallSampleStillFinite) {
  const McEstimate e =
      Simulate(ModelParams::Create(5, 0.5, 1.0), 6.0, Config(100));
  EXPECT_TRUE(std::isfinite(e.d_stderr));
  EXPECT_TRUE(std::isfinite(e.leakage_stderr));
}

TEST(DrawSamplesTest, SampleCovarianceNearModel) {
  const ModelParams p = ModelParams::Create(3, 0.5, 1.0);
  const CovMatrix sample = SampleCovariance(DrawSamples(p, 2.0, 200000, 5));
  const CovMatrix model = JointCovariance(p, 2.0);
  EXPECT_LT((sample.entries() - model.entries()).cwiseAbs().maxCoeff(), 0.1);
}

Eigen::MatrixXd Bivariate(double rho, std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd s(n, 2);
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = normal(rng);
    const double b = normal(rng);
    s(i, 0) = a;
    s(i, 1) = rho * a + std::sqrt(1.0 - rho * rho) * b;
  }
  return s;
}

TEST(EstimateMiFromSamplesTest, IndependentStreams) {
  EXPECT_LT(std::abs(EstimateMiFromSamples(Bivariate(0.0, 100000, 1),
                                           {{0}, {1}, {}})),
            0.01);
}

TEST(EstimateMiFromSamplesTest, CorrelatedPair) {
  EXPECT_NEAR(EstimateMiFromSamples(Bivariate(0.5, 100000, 2), {{0}, {1}, {}}),
              0.5 * std::log(4.0 / 3.0), 0.01);
}

TEST(EstimateMiFromSamplesTest, DuplicatedColumnIsSingular) {
  Eigen::MatrixXd s = Bivariate(0.0, 1000, 3);
  s.col(1) = s.col(0);
  EXPECT_THROW(EstimateMiFromSamples(s, {{0}, {1}, {}}), SingularMatrixError);
}

TEST(EstimateMiFromSamplesTest, TooFewSamples) {
  EXPECT_THROW(EstimateMiFromSamples(Bivariate(0.5, 19, 4), {{0}, {1}, {}}),
               InvalidArgumentError);
}

}  // namespace
}  // namespace dsest
