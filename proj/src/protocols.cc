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

#include "dsest/protocols.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dsest/errors.h"
#include "dsest/gaussian_linalg.h"

namespace dsest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckDistortionNoise(double sigma_q2) {
  if (std::isnan(sigma_q2) || sigma_q2 < 0.0) {
    throw InvalidArgumentError("sigma_q2", "must be >= 0");
  }
}

void CheckRateNoise(double sigma_q2) {
  if (std::isnan(sigma_q2) || !(sigma_q2 > 0.0)) {
    throw InvalidArgumentError(
        "sigma_q2",
        "rates need sigma_q2 > 0; they diverge as sigma_q2 -> 0 "
        "(distortion -> d_min)");
  }
}

void CheckDense(const ModelParams& params, double sigma_q2) {
  if (!std::isfinite(sigma_q2)) {
    throw InvalidArgumentError("sigma_q2",
                               "dense evaluation needs a finite value");
  }
  if (params.k > kMaxDenseAgents) {
    throw InvalidArgumentError("k", "dense evaluation limited to k <= " +
                                        std::to_string(kMaxDenseAgents));
  }
}

std::vector<int> CheckOrder(const ModelParams& params,
                            std::span<const int> order) {
  const int k = static_cast<int>(params.k);
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(k);
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected) {
    throw InvalidArgumentError("order", "must be a permutation of 0..K-1");
  }
  return {order.begin(), order.end()};
}

std::vector<int> IdentityOrder(const ModelParams& params) {
  std::vector<int> order(params.k);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

// log(v / sigma_q2), where v is the variance of one coordinate of an
// equicorrelated Gaussian vector (diagonal d, off-diagonal o) given m >= 1 of
// the others: v = (d - o)(d + m o) / (d + (m-1) o). `spread_ratio` is
// (d - o - sigma_q2) / sigma_q2.
double LogEquicorrelatedRatio(double d, double o, double spread_ratio,
                              double m) {
  return std::log1p(spread_ratio) + std::log1p(o / (d + (m - 1.0) * o));
}

}  // namespace

double AchievableDistortion(const ModelParams& params, double sigma_q2) {
  params.Validate();
  CheckDistortionNoise(sigma_q2);
  const Moments m = ComputeMoments(params);
  const DMinTerms t = ComputeDMinTerms(params);
  const double kk = static_cast<double>(params.k);
  const double f1 = F1(m.alpha, m.beta, kk, m.beta * m.beta / m.alpha);
  // D_max (1 - (K-1) [c2^2 / (sigma_x2 c1)] sigma_x2 / (f1 + sigma_q2)).
  return t.c1 - (kk - 1.0) * t.c2 * t.c2 / (f1 + sigma_q2);
}

double SigmaQ2ForDistortion(const ModelParams& params, double d_target) {
  params.Validate();
  const double d_min = DMin(params);
  const double d_max = DMax(params);
  const double slack = 1e-12 * d_max;
  if (!std::isfinite(d_target) || d_target < d_min - slack ||
      d_target > d_max + slack) {
    throw InfeasibleError(d_min, d_max,
                          "distortion " + std::to_string(d_target) +
                              " outside [" + std::to_string(d_min) + ", " +
                              std::to_string(d_max) + "]");
  }
  if (d_target <= d_min + slack && d_min < d_max) return 0.0;
  const Moments m = ComputeMoments(params);
  const DMinTerms t = ComputeDMinTerms(params);
  const double kk = static_cast<double>(params.k);
  const double f1 = F1(m.alpha, m.beta, kk, m.beta * m.beta / m.alpha);
  const double improvement = (kk - 1.0) * t.c2 * t.c2;
  const double gap = t.c1 - d_target;
  if (!(gap > 0.0) || improvement == 0.0) return kInf;
  return std::max(0.0, improvement / gap - f1);
}

std::vector<double> DistributedRates(const ModelParams& params,
                                     double sigma_q2) {
  params.Validate();
  return DistributedRates(params, sigma_q2, IdentityOrder(params));
}

std::vector<double> DistributedRates(const ModelParams& params,
                                     double sigma_q2,
                                     std::span<const int> order) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  CheckDense(params, sigma_q2);
  const std::vector<int> ord = CheckOrder(params, order);
  return DistributedRatesFromJoint(JointCovariance(params, sigma_q2), ord);
}

std::vector<double> DistributedRatesFromJoint(const CovMatrix& joint,
                                              std::span<const int> order) {
  const JointLayout at(static_cast<std::int64_t>(order.size()));
  if (joint.dim() != at.dim() || order.size() < 2) {
    throw InvalidArgumentError("joint", "dimension does not match 1 + 2K");
  }
  std::vector<double> rates(order.size());
  for (size_t j = 0; j < order.size(); ++j) {
    const int a = order[j];
    const double own = GaussianMi(joint, {{at.u(a)}, {at.y(a)}, {}});
    IndexPartition side{{at.u(a)}, {}, {}};
    if (j == 0) {
      side.right = {at.y(order[1])};
    } else {
      side.right.push_back(at.y(order[0]));
      for (size_t l = 0; l < j; ++l) side.right.push_back(at.u(order[l]));
    }
    rates[a] = own - GaussianMi(joint, side);
  }
  return rates;
}

std::vector<double> DistributedRatesStructured(const ModelParams& params,
                                               double sigma_q2) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  const Moments m = ComputeMoments(params);
  const DMinTerms t = ComputeDMinTerms(params);
  // Given Y_1, (U_2..U_K) is equicorrelated with diagonal c3 + sigma_q2 and
  // off-diagonal c4; U_1 given Y_2 has variance c3 + sigma_q2.
  const double d = t.c3 + sigma_q2;
  const double o = t.c4;
  const double ratio = (m.alpha - m.beta) / sigma_q2;
  std::vector<double> rates(params.k);
  rates[0] = 0.5 * std::log1p(t.c3 / sigma_q2);
  for (std::int64_t k = 1; k < params.k; ++k) {
    const double given = static_cast<double>(k - 1);
    rates[k] = (k == 1) ? rates[0]
                        : 0.5 * LogEquicorrelatedRatio(d, o, ratio, given);
  }
  return rates;
}

double DistributedSumRate(const ModelParams& params, double sigma_q2) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);
  const double b2a = m.beta * m.beta / m.alpha;
  const double spread = m.alpha + sigma_q2 - m.beta;
  // (K/2) log(spread / sigma_q2)
  //   + 1/2 log((alpha + sigma_q2 - beta^2/alpha) / spread)
  //   + 1/2 log((f1(K, beta^2/alpha) + sigma_q2) / spread),
  // each ratio written as 1 + (excess over the denominator).
  const double c4 = m.beta - b2a;
  return 0.5 * kk * std::log1p((m.alpha - m.beta) / sigma_q2) +
         0.5 * std::log1p(c4 / spread) +
         0.5 * std::log1p((kk - 1.0) * c4 / spread);
}

std::vector<double> CeoRates(const ModelParams& params, double sigma_q2) {
  params.Validate();
  return CeoRates(params, sigma_q2, IdentityOrder(params));
}

std::vector<double> CeoRates(const ModelParams& params, double sigma_q2,
                             std::span<const int> order) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  CheckDense(params, sigma_q2);
  const std::vector<int> ord = CheckOrder(params, order);
  const CovMatrix joint = JointCovariance(params, sigma_q2);
  const JointLayout at(params.k);

  std::vector<double> rates(params.k);
  IndexPartition prior{{}, {}, {}};
  for (const int a : ord) {
    const double own = GaussianMi(joint, {{at.u(a)}, {at.y(a)}, {}});
    prior.left = {at.u(a)};
    rates[a] = own - GaussianMi(joint, prior);
    prior.right.push_back(at.u(a));
  }
  return rates;
}

std::vector<double> CeoRatesStructured(const ModelParams& params,
                                       double sigma_q2) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  const Moments m = ComputeMoments(params);
  const double d = m.alpha + sigma_q2;
  const double ratio = (m.alpha - m.beta) / sigma_q2;
  std::vector<double> rates(params.k);
  rates[0] = 0.5 * std::log1p(m.alpha / sigma_q2);
  for (std::int64_t k = 1; k < params.k; ++k) {
    rates[k] = 0.5 * LogEquicorrelatedRatio(d, m.beta, ratio,
                                            static_cast<double>(k));
  }
  return rates;
}

double CeoSumRate(const ModelParams& params, double sigma_q2) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);
  const double spread = m.alpha + sigma_q2 - m.beta;
  // (K/2) log(spread / sigma_q2)
  //   + 1/2 log((alpha + sigma_q2 + (K-1) beta) / spread).
  return 0.5 * kk * std::log1p((m.alpha - m.beta) / sigma_q2) +
         0.5 * std::log1p(kk * m.beta / spread);
}

double PerUserRateLimit(double h, double sigma_x2, double sigma_q2) {
  if (!std::isfinite(h) || !(h > 0.0)) {
    throw InvalidArgumentError("h", "must be finite and > 0");
  }
  if (!std::isfinite(sigma_x2) || !(sigma_x2 > 0.0)) {
    throw InvalidArgumentError("sigma_x2", "must be finite and > 0");
  }
  CheckRateNoise(sigma_q2);
  const double r = 1.0 - std::sqrt(h);
  // alpha - beta does not depend on K.
  const double spread = sigma_x2 * r * r + kNoiseVariance;
  return 0.5 * std::log1p(spread / sigma_q2);
}

double LeakageFormula(const ModelParams& params) {
  params.Validate();
  const Moments m = ComputeMoments(params);
  const double s = params.sigma_x2;
  const double kk = static_cast<double>(params.k);
  const double own_less = m.alpha - s;
  const double excess = m.beta - std::sqrt(params.h) * s;
  const double c5 = excess * excess / own_less + params.h * s;
  const double num = m.alpha * F1(m.alpha, m.beta, kk, m.beta * m.beta / m.alpha);
  const double den = own_less * F1(m.alpha, m.beta, kk, c5);
  return 0.5 * std::log(num / den);
}

double LeakageExact(const ModelParams& params, double sigma_q2) {
  params.Validate();
  CheckDistortionNoise(sigma_q2);
  CheckDense(params, sigma_q2);
  return LeakageExactFromJoint(JointCovariance(params, sigma_q2));
}

double LeakageExactFromJoint(const CovMatrix& joint) {
  if (joint.dim() < 5 || joint.dim() % 2 == 0) {
    throw InvalidArgumentError("joint", "dimension does not match 1 + 2K");
  }
  const JointLayout at((joint.dim() - 1) / 2);
  IndexPartition part{{at.x1()}, {at.y(1), at.u(0)}, {}};
  for (int l = 2; l < at.k(); ++l) part.right.push_back(at.u(l));
  return GaussianMi(joint, part);
}

double LeakageExactStructured(const ModelParams& params, double sigma_q2) {
  params.Validate();
  CheckDistortionNoise(sigma_q2);
  const Moments m = ComputeMoments(params);
  const double s = params.sigma_x2;
  const double kk = static_cast<double>(params.k);
  const double rh = std::sqrt(params.h);
  // Observations (Y_2, U_1, U_3..U_K) have covariance D + beta 1 1^T with
  // D = diag(alpha - beta, alpha - beta + sigma_q2, ...).
  const double inv0 = 1.0 / (m.alpha - m.beta);
  const double inv1 = 1.0 / (m.alpha - m.beta + sigma_q2);
  const double c_y2 = rh * s;
  const double c_u1 = s;
  const double c_rest = rh * s;
  const double s1 = c_y2 * c_y2 * inv0 + c_u1 * c_u1 * inv1 +
                    (kk - 2.0) * c_rest * c_rest * inv1;
  const double s2 = c_y2 * inv0 + c_u1 * inv1 + (kk - 2.0) * c_rest * inv1;
  const double s3 = inv0 + (kk - 1.0) * inv1;
  const double explained = s1 - m.beta * s2 * s2 / (1.0 + m.beta * s3);
  return -0.5 * std::log1p(-explained / s);
}

ProtocolComparison CompareProtocols(const ModelParams& params,
                                    double sigma_q2) {
  const double dist = DistributedSumRate(params, sigma_q2);
  const double ceo = CeoSumRate(params, sigma_q2);
  const double gap = ceo - dist;
  return ProtocolComparison{.dist_sum = dist,
                            .ceo_sum = ceo,
                            .gap = gap,
                            .per_user_gap =
                                gap / static_cast<double>(params.k)};
}

double EncodingEquivalence::MaxRelativeMismatch() const {
  auto rel = [](double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
  };
  double worst = rel(local_distortion, progressive_distortion);
  for (size_t i = 0; i < local_rates.size(); ++i) {
    worst = std::max(worst, rel(local_rates[i], progressive_rates[i]));
  }
  return worst;
}

std::vector<EncodingEquivalence> EncodingEquivalenceCheck(
    const ModelParams& params, double sigma_q2,
    std::span<const double> coefficients) {
  params.Validate();
  CheckRateNoise(sigma_q2);
  CheckDense(params, sigma_q2);
  const CovMatrix joint = JointCovariance(params, sigma_q2);
  const JointLayout at(params.k);
  const int k = at.k();

  std::vector<int> y1_and_u{at.y(0)};
  for (int l = 0; l < k; ++l) y1_and_u.push_back(at.u(l));
  const double local_d =
      ConditionalCovariance(joint, std::vector<int>{at.x1()}, y1_and_u)(0, 0);
  const std::vector<double> local_rates = DistributedRates(params, sigma_q2);

  std::vector<EncodingEquivalence> out;
  for (const double a : coefficients) {
    // U~ = M U with M = (I - a S)^{-1}, S strictly lower triangular ones.
    Eigen::MatrixXd lower = Eigen::MatrixXd::Identity(k, k);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < r; ++c) lower(r, c) = -a;
    }
    const Eigen::MatrixXd mix =
        lower.triangularView<Eigen::UnitLower>().solve(
            Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd map = Eigen::MatrixXd::Identity(at.dim(), at.dim());
    map.bottomRightCorner(k, k) = mix;
    Eigen::MatrixXd prog = map * joint.entries() * map.transpose();
    prog = 0.5 * (prog + prog.transpose());
    const CovMatrix pj = CovMatrix::FromMatrixUnchecked(std::move(prog));

    EncodingEquivalence rec{.coefficient = a,
                            .local_rates = local_rates,
                            .progressive_rates = std::vector<double>(k),
                            .local_distortion = local_d,
                            .progressive_distortion = 0.0};
    rec.progressive_distortion =
        ConditionalCovariance(pj, std::vector<int>{at.x1()}, y1_and_u)(0, 0);
    for (int j = 0; j < k; ++j) {
      std::vector<int> prior;
      for (int l = 0; l < j; ++l) prior.push_back(at.u(l));
      IndexPartition own{{at.u(j)}, {at.y(j)}, {}};
      IndexPartition side{{at.u(j)}, {j == 0 ? at.y(1) : at.y(0)}, {}};
      own.right.insert(own.right.end(), prior.begin(), prior.end());
      side.right.insert(side.right.end(), prior.begin(), prior.end());
      rec.progressive_rates[j] = GaussianMi(pj, own) - GaussianMi(pj, side);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace dsest
