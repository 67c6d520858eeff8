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

#ifndef DSEST_EVALUATE_H_
#define DSEST_EVALUATE_H_

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dsest/network_model.h"
#include "dsest/units.h"

namespace dsest {

// One operating point. Information quantities are stored in nats; an empty
// optional marks a value that does not exist at this point (rates at
// sigma_q2 = 0, outer bounds outside their validity region).
struct RdlPoint {
  ModelParams params;
  double sigma_q2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  double d_achievable = 0.0;
  std::vector<double> rates_dist;  // per agent; empty when sigma_q2 == 0
  std::vector<double> rates_ceo;
  std::optional<double> r_sum_dist;
  std::optional<double> r_per_user_dist;
  std::optional<double> r_sum_ceo;
  std::optional<double> r_per_user_ceo;
  std::optional<double> r_per_user_limit;
  double leakage_formula = 0.0;
  std::optional<double> leakage_exact;
  std::optional<double> r1_outer;
  std::optional<double> leakage_outer;
};

struct EvaluateOptions {
  bool include_outer = true;
  bool include_exact_leakage = true;
  // Keep per-agent rate vectors (O(K) memory per point).
  bool keep_rate_vectors = false;
};

// Evaluates every closed form at (params, sigma_q2), 0 <= sigma_q2 <= inf.
// Uses the O(K) structured forms, so any K is accepted. The outer bounds are
// calibrated at the achieved distortion.
RdlPoint EvaluatePoint(const ModelParams& params, double sigma_q2,
                       const EvaluateOptions& options = {});

struct SweepSpec {
  std::vector<std::int64_t> k_values;
  double h = 0.5;
  double sigma_x2 = 1.0;
  double sigma_q2 = 6.0;
  Units units = Units::kBits;
  bool include_outer = true;
  bool include_exact_leakage = true;

  // Throws InvalidArgumentError unless k_values is nonempty, strictly
  // increasing, every K >= 2, and the model parameters are valid.
  void Validate() const;
};

std::vector<RdlPoint> RunSweep(const SweepSpec& spec);

inline constexpr std::array<std::string_view, 19> kCsvColumns = {
    "k",
    "h",
    "sigma_x2",
    "sigma_q2",
    "units",
    "alpha",
    "beta",
    "d_min",
    "d_max",
    "d_achievable",
    "r_sum_dist",
    "r_per_user_dist",
    "r_sum_ceo",
    "r_per_user_ceo",
    "r_per_user_limit",
    "leakage_formula",
    "leakage_exact",
    "r1_outer",
    "leakage_outer",
};

inline constexpr std::string_view kNaToken = "NA";

// %.15g, or NA for absent and non-finite values.
std::string FormatNumber(std::optional<double> value);

void WriteCsvHeader(std::ostream& out);
void WriteCsvRow(std::ostream& out, const RdlPoint& point, Units units);

// "name = value" lines in column order.
void WriteText(std::ostream& out, const RdlPoint& point, Units units);

}  // namespace dsest

#endif  // DSEST_EVALUATE_H_
