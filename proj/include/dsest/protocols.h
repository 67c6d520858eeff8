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

#ifndef DSEST_PROTOCOLS_H_
#define DSEST_PROTOCOLS_H_

#include <span>
#include <vector>

#include "dsest/network_model.h"

namespace dsest {

enum class ProtocolKind { kDistributed, kCentralized };
enum class EncodingKind { kLocal, kProgressive };

// All rates and leakages below are in nats. Rate functions require
// sigma_q2 > 0 (they diverge at 0); sigma_q2 = +inf is accepted and yields
// the limiting value 0.

// E[var(X_1 | Y_1, U_2..U_K)]: D_max at sigma_q2 = inf, D_min at 0.
double AchievableDistortion(const ModelParams& params, double sigma_q2);

// Inverse of AchievableDistortion. Returns +inf when d_target equals d_max
// (any sufficiently large sigma_q2 qualifies, including every sigma_q2 when
// d_min == d_max) and 0 within 1e-12 d_max of d_min. Throws InfeasibleError
// outside [d_min, d_max].
double SigmaQ2ForDistortion(const ModelParams& params, double d_target);

// Per-agent rates of the distributed protocol, indexed by agent:
// R_1 = I(U_1;Y_1) - I(U_1;Y_2), R_k = I(U_k;Y_k) - I(U_k;Y_1 U_1..U_{k-1}).
// Evaluated with GaussianMi on the dense joint covariance.
std::vector<double> DistributedRates(const ModelParams& params,
                                     double sigma_q2);

// Same, for the broadcast order `order` (a permutation of 0..K-1; order[0]
// speaks first). Entry a of the result is the rate of agent a.
std::vector<double> DistributedRates(const ModelParams& params,
                                     double sigma_q2,
                                     std::span<const int> order);

// Closed-form per-agent distributed rates for the order 1..K; O(K), valid
// for any K.
// Distributed rates evaluated on any joint covariance laid out as
// JointLayout (e.g. a sample covariance). `order` has length K.
std::vector<double> DistributedRatesFromJoint(const CovMatrix& joint,
                                              std::span<const int> order);

std::vector<double> DistributedRatesStructured(const ModelParams& params,
                                               double sigma_q2);

double DistributedSumRate(const ModelParams& params, double sigma_q2);

// CEO protocol: R_1 = I(U_1;Y_1), R_k = I(U_k;Y_k) - I(U_k;U_1..U_{k-1}).
std::vector<double> CeoRates(const ModelParams& params, double sigma_q2);
std::vector<double> CeoRates(const ModelParams& params, double sigma_q2,
                             std::span<const int> order);
std::vector<double> CeoRatesStructured(const ModelParams& params,
                                       double sigma_q2);

double CeoSumRate(const ModelParams& params, double sigma_q2);

// Common large-K per-agent rate of both protocols,
// 1/2 log((sigma_x2 (1 - sqrt h)^2 + 1 + sigma_q2) / sigma_q2).
double PerUserRateLimit(double h, double sigma_x2, double sigma_q2);

// Leakage closed form 1/2 log(alpha f1(K, beta^2/alpha) /
// ((alpha - sigma_x2) f1(K, c5))). Has no sigma_q2 dependence.
double LeakageFormula(const ModelParams& params);

// I(X_1; Y_2, U_1, U_3..U_K) via GaussianMi on the dense joint covariance.
// U_2 is left out: given Y_2 it carries no information about X_1.
double LeakageExact(const ModelParams& params, double sigma_q2);

// The same mutual information on any JointLayout-shaped covariance.
double LeakageExactFromJoint(const CovMatrix& joint);

// The same quantity through a Sherman-Morrison solve; O(1) in K.
double LeakageExactStructured(const ModelParams& params, double sigma_q2);

struct ProtocolComparison {
  double dist_sum;
  double ceo_sum;
  double gap;           // ceo_sum - dist_sum
  double per_user_gap;  // gap / K
};

ProtocolComparison CompareProtocols(const ModelParams& params,
                                    double sigma_q2);

// Local vs progressive encoding at one progressive coefficient a, where
// U~_1 = U_1 and U~_k = Y_k + a sum_{l<k} U~_l + Q_k.
struct EncodingEquivalence {
  double coefficient;
  std::vector<double> local_rates;
  std::vector<double> progressive_rates;
  double local_distortion;        // E[var(X_1 | Y_1 U_1..U_K)]
  double progressive_distortion;  // E[var(X_1 | Y_1 U~_1..U~_K)]

  // Largest |local - progressive| / max(|local|, tiny) over all pairs.
  double MaxRelativeMismatch() const;
};

inline constexpr double kDefaultProgressiveCoefficients[] = {0.0, 0.5, 1.0};

std::vector<EncodingEquivalence> EncodingEquivalenceCheck(
    const ModelParams& params, double sigma_q2,
    std::span<const double> coefficients = kDefaultProgressiveCoefficients);

}  // namespace dsest

#endif  // DSEST_PROTOCOLS_H_
