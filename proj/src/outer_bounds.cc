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

#include "dsest/outer_bounds.h"

#include <cmath>
#include <limits>

#include "dsest/errors.h"
#include "dsest/gaussian_linalg.h"
#include "dsest/protocols.h"

namespace dsest {
namespace {

double CheckedHalfLog(double argument, const char* term) {
  if (!(argument > 0.0) || !std::isfinite(argument)) {
    throw OutsideValidityError(term, "log argument " +
                                         std::to_string(argument) +
                                         " is not a positive finite number");
  }
  return 0.5 * std::log(argument);
}

// 1 - alpha g = sigma_z2 / (b^2 alpha + sigma_z2), computed without
// cancellation. Equals 1 when b == 0.
double ResidualFraction(const ModelParams& params,
                        const EstimatorCalibration& calib) {
  if (calib.b == 0.0) return 1.0;
  const Moments m = ComputeMoments(params);
  return calib.sigma_z2 / (calib.b * calib.b * m.alpha + calib.sigma_z2);
}

}  // namespace

EstimatorCalibration DeriveEstimatorTerms(const ModelParams& params, double b,
                                          double sigma_z2) {
  params.Validate();
  if (!std::isfinite(b)) throw InvalidArgumentError("b", "must be finite");
  if (!std::isfinite(sigma_z2) || sigma_z2 < 0.0) {
    throw InvalidArgumentError("sigma_z2", "must be finite and >= 0");
  }
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);
  const double b2 = b * b;
  const double spread = 1.0 + (kk - 2.0) * std::sqrt(params.h);

  EstimatorCalibration c;
  c.b = b;
  c.sigma_z2 = sigma_z2;
  c.g = (b == 0.0) ? 0.0 : b2 / (b2 * m.alpha + sigma_z2);
  c.g1 = b2 * ((kk - 1.0) * m.alpha + (kk - 1.0) * (kk - 2.0) * m.beta) +
         sigma_z2;
  const double rho = (b == 0.0) ? 0.0 : b2 / c.g1;
  c.q1 = m.alpha - rho * m.beta * m.beta * (kk - 1.0) * (kk - 1.0);
  c.q2 = rho * spread * m.beta * (kk - 1.0);
  c.q3 = rho * spread * spread;
  return c;
}

EstimatorCalibration Calibrate(const ModelParams& params, double d_target) {
  params.Validate();
  EstimatorCalibration c =
      CalibrateAtSigmaQ2(params, SigmaQ2ForDistortion(params, d_target));
  c.d_target = d_target;
  return c;
}

EstimatorCalibration CalibrateAtSigmaQ2(const ModelParams& params,
                                        double sigma_q2) {
  params.Validate();
  if (std::isnan(sigma_q2) || sigma_q2 < 0.0) {
    throw InvalidArgumentError("sigma_q2", "must be >= 0");
  }
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);
  const double s = params.sigma_x2;
  const double rh = std::sqrt(params.h);

  double w_self = s / m.alpha;
  double b = 0.0;
  double sigma_z2 = 0.0;
  if (std::isfinite(sigma_q2)) {
    // Normal equations of the MMSE estimate of X_2 from (Y_2, U_l l != 2),
    // reduced by symmetry to one weight on Y_2 and a common weight on the U's.
    const double u_block = m.alpha + sigma_q2 + (kk - 2.0) * m.beta;
    const double det = m.alpha * u_block - (kk - 1.0) * m.beta * m.beta;
    w_self = s * (u_block - (kk - 1.0) * m.beta * rh) / det;
    const double w_other = s * (m.alpha * rh - m.beta) / det;
    b = w_other / w_self;
    sigma_z2 = b * b * (kk - 1.0) * sigma_q2;
  }
  EstimatorCalibration c = DeriveEstimatorTerms(params, b, sigma_z2);
  c.d_target = AchievableDistortion(params, sigma_q2);
  c.sigma_q2 = sigma_q2;
  c.gain = w_self;
  return c;
}

RateOuterBoundTerms ComputeRateOuterBoundTerms(
    const ModelParams& params, const EstimatorCalibration& calib) {
  params.Validate();
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);
  const double b2a = m.beta * m.beta / m.alpha;
  const double residual = ResidualFraction(params, calib);

  RateOuterBoundTerms t;
  t.ob_c1 = m.beta * m.beta * calib.g;
  // (beta - beta alpha g)^2 / (alpha - alpha^2 g) = beta^2 residual / alpha.
  t.ob_c2 = t.ob_c1 + b2a * residual;
  t.first = CheckedHalfLog(F1(m.alpha, m.beta, kk, b2a) *
                               (m.alpha - m.beta) /
                               F1(m.alpha, m.beta, kk - 1.0, b2a),
                           "f1(K,beta^2/alpha)(alpha-beta)/f1(K-1,beta^2/alpha)");
  const double f1_c1 = F1(m.alpha, m.beta, kk, t.ob_c1);
  const double f1_c2 = F1(m.alpha, m.beta, kk, t.ob_c2);
  if (!(f1_c1 > 0.0)) {
    throw OutsideValidityError("f1(K,c1)", "must be positive");
  }
  if (!(residual > 0.0)) {
    throw OutsideValidityError(
        "alpha - alpha^2 g", "must be positive (sigma_z2 = 0 with b != 0)");
  }
  t.second = CheckedHalfLog(f1_c2 / f1_c1 * m.alpha * residual,
                            "f1(K,c2)/f1(K,c1)(alpha - alpha^2 g)");
  return t;
}

double RateOuterBound(const ModelParams& params,
                      const EstimatorCalibration& calib) {
  const RateOuterBoundTerms t = ComputeRateOuterBoundTerms(params, calib);
  return t.first - t.second;
}

double LeakageOuterBound(const ModelParams& params,
                         const EstimatorCalibration& calib) {
  params.Validate();
  const double s = params.sigma_x2;
  const double cross = std::sqrt(params.h) - calib.q2;
  if (!(calib.q1 > 0.0)) {
    throw OutsideValidityError("q1", "must be positive");
  }
  const double den = (1.0 - s * calib.q3) * calib.q1 - s * cross * cross;
  if (!(den > 0.0)) {
    throw OutsideValidityError(
        "(1 - sigma_x2 q3) q1 - sigma_x2 (sqrt h - q2)^2", "must be positive");
  }
  return CheckedHalfLog(calib.q1 / den, "leakage bound");
}

double PrintedLeakageExpression(const ModelParams& params,
                                const EstimatorCalibration& calib) {
  params.Validate();
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);
  const double s = params.sigma_x2;
  const double rh = std::sqrt(params.h);
  const double b2 = calib.b * calib.b;
  const double q1 =
      m.alpha - calib.g1 * b2 * m.beta * m.beta * (kk - 1.0) * (kk - 1.0);
  const double q2 =
      calib.g1 * b2 * (1.0 + (kk - 2.0) * rh) * m.beta * (kk - 1.0);
  const double den = (1.0 - s * q2 * q2) * q1 - s * (rh - q2) * (rh - q2);
  if (!(q1 > 0.0) || !(den > 0.0)) {
    throw OutsideValidityError("printed leakage", "nonpositive log argument");
  }
  return 0.5 * std::log(q1 / den);
}

double PerUserOuterRate(const ModelParams& params,
                        const EstimatorCalibration& calib) {
  return RateOuterBound(params, calib) / static_cast<double>(params.k);
}

std::vector<OuterBoundScanPoint> ScanOuterBoundsOverB(
    const ModelParams& params, double sigma_z2,
    std::span<const double> b_values) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<OuterBoundScanPoint> out;
  out.reserve(b_values.size());
  for (const double b : b_values) {
    const EstimatorCalibration c = DeriveEstimatorTerms(params, b, sigma_z2);
    OuterBoundScanPoint p{b, kNaN, kNaN};
    try {
      p.rate = RateOuterBound(params, c);
    } catch (const OutsideValidityError&) {
    }
    try {
      p.leakage = LeakageOuterBound(params, c);
    } catch (const OutsideValidityError&) {
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace dsest
