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

#include "dsest/network_model.h"

#include <cmath>
#include <string>

#include "dsest/errors.h"

namespace dsest {

void ModelParams::Validate() const {
  if (k < 2) throw InvalidArgumentError("k", "need at least 2 agents");
  if (!std::isfinite(h) || !(h > 0.0)) {
    throw InvalidArgumentError("h", "must be finite and > 0");
  }
  if (!std::isfinite(sigma_x2) || !(sigma_x2 > 0.0)) {
    throw InvalidArgumentError("sigma_x2", "must be finite and > 0");
  }
}

Moments ComputeMoments(const ModelParams& params) {
  const double kk = static_cast<double>(params.k);
  const double s = params.sigma_x2;
  return Moments{
      .alpha = s * (1.0 + params.h * (kk - 1.0)) + kNoiseVariance,
      .beta = s * (2.0 * std::sqrt(params.h) + params.h * (kk - 2.0)),
  };
}

CovMatrix JointCovariance(const ModelParams& params, double sigma_q2) {
  params.Validate();
  if (!(sigma_q2 >= 0.0) || !std::isfinite(sigma_q2)) {
    throw InvalidArgumentError("sigma_q2", "must be finite and >= 0");
  }
  if (params.k > kMaxDenseAgents) {
    throw InvalidArgumentError(
        "k", "dense covariance limited to k <= " +
                 std::to_string(kMaxDenseAgents));
  }
  const JointLayout at(params.k);
  const int k = at.k();
  const Moments m = ComputeMoments(params);
  const double s = params.sigma_x2;
  const double cross = std::sqrt(params.h) * s;

  Eigen::MatrixXd c(at.dim(), at.dim());
  c(at.x1(), at.x1()) = s;
  for (int i = 0; i < k; ++i) {
    const double x1_y = (i == 0) ? s : cross;
    c(at.x1(), at.y(i)) = c(at.y(i), at.x1()) = x1_y;
    c(at.x1(), at.u(i)) = c(at.u(i), at.x1()) = x1_y;
    for (int j = 0; j < k; ++j) {
      const double yy = (i == j) ? m.alpha : m.beta;
      c(at.y(i), at.y(j)) = yy;
      c(at.y(i), at.u(j)) = yy;
      c(at.u(i), at.y(j)) = yy;
      c(at.u(i), at.u(j)) = (i == j) ? m.alpha + sigma_q2 : m.beta;
    }
  }
  return CovMatrix::FromMatrixUnchecked(std::move(c));
}

double DMax(const ModelParams& params) {
  params.Validate();
  const Moments m = ComputeMoments(params);
  return params.sigma_x2 * (1.0 - params.sigma_x2 / m.alpha);
}

DMinTerms ComputeDMinTerms(const ModelParams& params) {
  params.Validate();
  const Moments m = ComputeMoments(params);
  const double s = params.sigma_x2;
  const double b2a = m.beta * m.beta / m.alpha;
  return DMinTerms{
      .c1 = s - s * s / m.alpha,
      .c2 = s * (std::sqrt(params.h) - m.beta / m.alpha),
      .c3 = m.alpha - b2a,
      .c4 = m.beta - b2a,
  };
}

double DMin(const ModelParams& params) {
  const Moments m = ComputeMoments(params);
  const DMinTerms t = ComputeDMinTerms(params);
  const double kk = static_cast<double>(params.k);
  // D_max (1 - (K-1) c2^2 / (c1 f1(K, beta^2/alpha))), with c1 = D_max.
  const double f1 = F1(m.alpha, m.beta, kk, m.beta * m.beta / m.alpha);
  return t.c1 - (kk - 1.0) * t.c2 * t.c2 / f1;
}

double DMinLimit(const ModelParams& params) {
  params.Validate();
  const double r = 1.0 - std::sqrt(params.h);
  return params.sigma_x2 * (1.0 - r * r / params.h);
}

}  // namespace dsest
