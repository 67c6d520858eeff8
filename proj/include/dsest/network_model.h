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

#ifndef DSEST_NETWORK_MODEL_H_
#define DSEST_NETWORK_MODEL_H_

#include <cstdint>

#include "dsest/gaussian_linalg.h"

namespace dsest {

// Variance of the measurement noise Z_k. Fixed; rescale sigma_x2 instead.
inline constexpr double kNoiseVariance = 1.0;

// Largest K for which dense joint covariances are assembled.
inline constexpr std::int64_t kMaxDenseAgents = 2000;

// Symmetric K-agent network: Y_k = X_k + sqrt(h) sum_{l != k} X_l + Z_k with
// X_m ~ N(0, sigma_x2) and Z_k ~ N(0, 1), all independent.
struct ModelParams {
  std::int64_t k = 2;
  double h = 1.0;
  double sigma_x2 = 1.0;

  // Throws InvalidArgumentError naming the field: k >= 2, h > 0,
  // sigma_x2 > 0, all finite.
  void Validate() const;

  static ModelParams Create(std::int64_t k, double h, double sigma_x2) {
    ModelParams p{k, h, sigma_x2};
    p.Validate();
    return p;
  }
};

// Second-order statistics of the measurements.
struct Moments {
  double alpha;  // E[Y_l^2]
  double beta;   // E[Y_l Y_k], l != k
};

Moments ComputeMoments(const ModelParams& params);

// Index layout of JointCovariance: X_1, then Y_1..Y_K, then U_1..U_K.
// Agents are 0-based here (agent 0 is "agent 1").
class JointLayout {
 public:
  explicit JointLayout(std::int64_t k) : k_(static_cast<int>(k)) {}

  int x1() const { return 0; }
  int y(int agent) const { return 1 + agent; }
  int u(int agent) const { return 1 + k_ + agent; }
  int dim() const { return 1 + 2 * k_; }
  int k() const { return k_; }

 private:
  int k_;
};

// Covariance of (X_1, Y_1..Y_K, U_1..U_K) with U_k = Y_k + Q_k,
// Q_k ~ N(0, sigma_q2). Requires k <= kMaxDenseAgents.
CovMatrix JointCovariance(const ModelParams& params, double sigma_q2);

// E[var(X_1 | Y_1)] = sigma_x2 (1 - sigma_x2 / alpha).
double DMax(const ModelParams& params);

// Intermediates of the D_min computation, exposed for inspection:
// c1 = sigma_x2 - sigma_x2^2/alpha, c2 = sigma_x2 (sqrt h - beta/alpha),
// c3 = alpha - beta^2/alpha, c4 = beta - beta^2/alpha.
struct DMinTerms {
  double c1;
  double c2;
  double c3;
  double c4;
};

DMinTerms ComputeDMinTerms(const ModelParams& params);

// E[var(X_1 | Y_1..Y_K)].
double DMin(const ModelParams& params);

// Large-K asymptote of D_min: sigma_x2 (1 - (1 - sqrt h)^2 / h). Independent
// of params.k. May be <= 0 when sqrt h <= 1/2; returned as is.
double DMinLimit(const ModelParams& params);

}  // namespace dsest

#endif  // DSEST_NETWORK_MODEL_H_
