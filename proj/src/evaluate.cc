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

#include "dsest/evaluate.h"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "dsest/errors.h"
#include "dsest/outer_bounds.h"
#include "dsest/protocols.h"

namespace dsest {
namespace {

std::optional<double> InUnits(std::optional<double> nats, Units units) {
  if (!nats) return std::nullopt;
  return ToUnits(*nats, units);
}

// Values in column order; strings for the two non-numeric cells.
std::array<std::string, kCsvColumns.size()> Cells(const RdlPoint& p,
                                                  Units units) {
  return {
      std::to_string(p.params.k),
      FormatNumber(p.params.h),
      FormatNumber(p.params.sigma_x2),
      FormatNumber(p.sigma_q2),
      std::string(UnitsName(units)),
      FormatNumber(p.alpha),
      FormatNumber(p.beta),
      FormatNumber(p.d_min),
      FormatNumber(p.d_max),
      FormatNumber(p.d_achievable),
      FormatNumber(InUnits(p.r_sum_dist, units)),
      FormatNumber(InUnits(p.r_per_user_dist, units)),
      FormatNumber(InUnits(p.r_sum_ceo, units)),
      FormatNumber(InUnits(p.r_per_user_ceo, units)),
      FormatNumber(InUnits(p.r_per_user_limit, units)),
      FormatNumber(ToUnits(p.leakage_formula, units)),
      FormatNumber(InUnits(p.leakage_exact, units)),
      FormatNumber(InUnits(p.r1_outer, units)),
      FormatNumber(InUnits(p.leakage_outer, units)),
  };
}

double Sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

RdlPoint EvaluatePoint(const ModelParams& params, double sigma_q2,
                       const EvaluateOptions& options) {
  params.Validate();
  if (std::isnan(sigma_q2) || sigma_q2 < 0.0) {
    throw InvalidArgumentError("sigma_q2", "must be >= 0");
  }
  const Moments m = ComputeMoments(params);
  const double kk = static_cast<double>(params.k);

  RdlPoint p;
  p.params = params;
  p.sigma_q2 = sigma_q2;
  p.alpha = m.alpha;
  p.beta = m.beta;
  p.d_min = DMin(params);
  p.d_max = DMax(params);
  p.d_achievable = AchievableDistortion(params, sigma_q2);
  p.leakage_formula = LeakageFormula(params);

  if (sigma_q2 > 0.0) {
    std::vector<double> dist = DistributedRatesStructured(params, sigma_q2);
    std::vector<double> ceo = CeoRatesStructured(params, sigma_q2);
    p.r_sum_dist = Sum(dist);
    p.r_sum_ceo = Sum(ceo);
    p.r_per_user_dist = *p.r_sum_dist / kk;
    p.r_per_user_ceo = *p.r_sum_ceo / kk;
    p.r_per_user_limit = PerUserRateLimit(params.h, params.sigma_x2, sigma_q2);
    if (options.keep_rate_vectors) {
      p.rates_dist = std::move(dist);
      p.rates_ceo = std::move(ceo);
    }
  }
  if (options.include_exact_leakage) {
    p.leakage_exact = LeakageExactStructured(params, sigma_q2);
  }
  if (options.include_outer) {
    const EstimatorCalibration calib = CalibrateAtSigmaQ2(params, sigma_q2);
    try {
      p.r1_outer = RateOuterBound(params, calib);
    } catch (const OutsideValidityError&) {
    }
    try {
      p.leakage_outer = LeakageOuterBound(params, calib);
    } catch (const OutsideValidityError&) {
    }
  }
  return p;
}

void SweepSpec::Validate() const {
  if (k_values.empty()) {
    throw InvalidArgumentError("k_values", "must be nonempty");
  }
  for (size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 2) {
      throw InvalidArgumentError("k", "every K must be >= 2");
    }
    if (i > 0 && k_values[i] <= k_values[i - 1]) {
      throw InvalidArgumentError("k_values", "must be strictly increasing");
    }
  }
  ModelParams::Create(k_values.front(), h, sigma_x2);
  if (std::isnan(sigma_q2) || sigma_q2 < 0.0) {
    throw InvalidArgumentError("sigma_q2", "must be >= 0");
  }
}

std::vector<RdlPoint> RunSweep(const SweepSpec& spec) {
  spec.Validate();
  EvaluateOptions options;
  options.include_outer = spec.include_outer;
  options.include_exact_leakage = spec.include_exact_leakage;
  std::vector<RdlPoint> rows;
  rows.reserve(spec.k_values.size());
  for (const std::int64_t k : spec.k_values) {
    rows.push_back(EvaluatePoint(ModelParams::Create(k, spec.h, spec.sigma_x2),
                                 spec.sigma_q2, options));
  }
  return rows;
}

std::string FormatNumber(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return std::string(kNaToken);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", *value);
  return buf;
}

void WriteCsvHeader(std::ostream& out) {
  for (size_t i = 0; i < kCsvColumns.size(); ++i) {
    out << (i ? "," : "") << kCsvColumns[i];
  }
  out << '\n';
}

void WriteCsvRow(std::ostream& out, const RdlPoint& point, Units units) {
  const auto cells = Cells(point, units);
  for (size_t i = 0; i < cells.size(); ++i) {
    out << (i ? "," : "") << cells[i];
  }
  out << '\n';
}

void WriteText(std::ostream& out, const RdlPoint& point, Units units) {
  const auto cells = Cells(point, units);
  for (size_t i = 0; i < cells.size(); ++i) {
    out << kCsvColumns[i] << " = " << cells[i] << '\n';
  }
}

}  // namespace dsest
