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

#ifndef DSEST_OUTER_BOUNDS_H_
#define DSEST_OUTER_BOUNDS_H_

#include <span>
#include <vector>

#include "dsest/network_model.h"

namespace dsest {

// Parameters of agent 2's estimate written with unit weight on its own
// measurement, Xhat_2 = Y_2 + b sum_{l != 2} Y_l + Z with Z ~ N(0, sigma_z2)
// independent of the measurements, plus the quantities the bounds consume.
//
// Calibration places Xhat_2 at the estimate agent 2 actually forms in the
// distributed scheme at the test-channel noise that achieves d_target: the
// linear MMSE estimate from (Y_2, U_l for l != 2) equals gain * Xhat_2, with
// b = w_other / w_self and Z = (w_other / w_self) sum_{l != 2} Q_l.
struct EstimatorCalibration {
  double d_target = 0.0;
  double sigma_q2 = 0.0;  // matched test-channel noise; +inf at d_max
  double b = 0.0;
  double sigma_z2 = 0.0;
  double gain = 0.0;  // weight on Y_2 of the MMSE estimate (w_self)
  double g = 0.0;     // b^2 / (b^2 alpha + sigma_z2); 0 when b == 0
  double g1 = 0.0;    // E[(Xhat_2 - Y_2)^2]
  double q1 = 0.0;    // var(Y_2 | V)
  double q2 = 0.0;    // cov(X_1, V) cov(Y_2, V) / (sigma_x2 g1), V = Xhat_2 - Y_2
  double q3 = 0.0;    // cov(X_1, V)^2 / (sigma_x2^2 g1)
};

// Throws InfeasibleError (carrying [d_min, d_max]) when d_target is outside
// the achievable interval.
EstimatorCalibration Calibrate(const ModelParams& params, double d_target);

// Calibration at a given test-channel noise (0 <= sigma_q2 <= inf); d_target
// is set to AchievableDistortion(params, sigma_q2).
EstimatorCalibration CalibrateAtSigmaQ2(const ModelParams& params,
                                        double sigma_q2);

// Fills g, g1, q1..q3 from (b, sigma_z2) and the model. Exposed so callers
// can evaluate the bounds for hand-picked estimator parameters.
EstimatorCalibration DeriveEstimatorTerms(const ModelParams& params, double b,
                                          double sigma_z2);

// Pieces of the rate bound; ob_c1, ob_c2 are the bound's own intermediates
// (distinct from the D_min c1, c2).
struct RateOuterBoundTerms {
  double ob_c1;
  double ob_c2;
  double first;   // 1/2 log(f1(K,b^2/a)(alpha-beta)/f1(K-1,b^2/a))
  double second;  // 1/2 log(f1(K,ob_c2)/f1(K,ob_c1) (alpha - alpha^2 g))
};

RateOuterBoundTerms ComputeRateOuterBoundTerms(
    const ModelParams& params, const EstimatorCalibration& calib);

// R_1 >= first - second, in nats. Throws OutsideValidityError naming the
// failing term if a log argument is nonpositive (e.g. sigma_z2 = 0 with
// b != 0, the d_min endpoint).
double RateOuterBound(const ModelParams& params,
                      const EstimatorCalibration& calib);

// L_1^(2) >= 1/2 log(q1 / ((1 - sigma_x2 q3) q1 - sigma_x2 (sqrt h - q2)^2)),
// which is I(X_1; Y_2, Xhat_2). Throws OutsideValidityError on a nonpositive
// log argument.
double LeakageOuterBound(const ModelParams& params,
                         const EstimatorCalibration& calib);

// The leakage display evaluated literally with q1' = alpha - g1 b^2 beta^2
// (K-1)^2, q2' = g1 b^2 (1 + (K-2) sqrt h) beta (K-1) and q2'^2 in place of
// q3. Not a valid bound in general; kept for inspection.
double PrintedLeakageExpression(const ModelParams& params,
                                const EstimatorCalibration& calib);

// RateOuterBound / K.
double PerUserOuterRate(const ModelParams& params,
                        const EstimatorCalibration& calib);

struct OuterBoundScanPoint {
  double b;
  double rate;     // NaN where the bound is outside its validity region.
  double leakage;  // Same.
};

// Evaluates both bounds over `b_values` at fixed sigma_z2. Inspection only.
std::vector<OuterBoundScanPoint> ScanOuterBoundsOverB(
    const ModelParams& params, double sigma_z2,
    std::span<const double> b_values);

}  // namespace dsest

#endif  // DSEST_OUTER_BOUNDS_H_
