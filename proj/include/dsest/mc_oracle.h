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

#ifndef DSEST_MC_ORACLE_H_
#define DSEST_MC_ORACLE_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dsest/gaussian_linalg.h"
#include "dsest/network_model.h"

namespace dsest {

inline constexpr int kMcBatches = 20;

struct McConfig {
  std::int64_t n = 200000;  // samples per trial
  std::uint64_t seed = 42;
  int trials = 1;

  // Throws InvalidArgumentError unless n >= 100 and trials >= 1.
  void Validate() const;
};

struct McEstimate {
  double d_hat = 0.0;
  double d_stderr = 0.0;
  double leakage_hat = 0.0;  // nats
  double leakage_stderr = 0.0;
  std::vector<double> rates_hat;  // nats; empty when sigma_q2 == 0
};

// Seed of trial t. Depends only on (seed, t).
std::uint64_t TrialSeed(std::uint64_t seed, int trial);

// Draws cfg.n samples of (X_1, Y_1..Y_K, U_1..U_K) per layout JointLayout.
Eigen::MatrixXd DrawSamples(const ModelParams& params, double sigma_q2,
                            std::int64_t n, std::uint64_t seed);

// One trial drawn from `seed` directly (Simulate uses TrialSeed(seed, t)).
McEstimate SimulateTrial(const ModelParams& params, double sigma_q2,
                         std::int64_t n, std::uint64_t seed);

// Simulates the test-channel model. d_hat is the empirical MSE of the
// linear MMSE estimate of X_1 from (Y_1, U_2..U_K) with weights from the
// model covariance; leakage_hat and rates_hat are plug-in Gaussian values on
// the sample covariance. Standard errors come from 20-way batching. With
// several trials the per-trial values are averaged in trial order and the
// standard error is sqrt(sum se_t^2) / trials. sigma_q2 must be finite.
McEstimate Simulate(const ModelParams& params, double sigma_q2,
                    const McConfig& cfg);

// Unbiased sample covariance of the rows of `samples`.
CovMatrix SampleCovariance(const Eigen::MatrixXd& samples);

// Plug-in I(left; right | conditioning) on the sample covariance. Requires
// rows >= 10 * cols; throws SingularMatrixError on rank deficiency.
double EstimateMiFromSamples(const Eigen::MatrixXd& samples,
                             const IndexPartition& part);

}  // namespace dsest

#endif  // DSEST_MC_ORACLE_H_
