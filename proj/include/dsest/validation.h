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

#ifndef DSEST_VALIDATION_H_
#define DSEST_VALIDATION_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "dsest/network_model.h"

namespace dsest {

enum class ValidationGrid { kSmall, kFull };

struct ValidationOptions {
  ValidationGrid grid = ValidationGrid::kSmall;
  std::int64_t mc_samples = 200000;
  std::uint64_t seed = 42;
  double closed_form_tolerance = 1e-9;  // relative
  double leakage_tolerance = 1e-10;     // relative, leakage_exact(0)
  double formula_tolerance = 1e-6;      // relative, leakage_formula
  double outer_tolerance = 1e-9;        // absolute excess over achievable
  double roundtrip_tolerance = 1e-8;    // relative, sigma_q2 inversion
  double mc_sigmas = 3.0;
  double mc_distortion_relative = 0.01;
  double mc_leakage_relative = 0.02;
  // Dev-only mutation hook: the closed-form d_min is scaled by (1 + eps)
  // before comparison.
  double perturb_closed_form = 0.0;
};

struct SuiteResult {
  std::string name;
  double max_error = 0.0;  // in the suite's own metric
  double tolerance = 0.0;
  std::int64_t checks = 0;
  std::string worst;  // description of the worst point
  std::string note;
  bool passed = true;
};

struct ValidationReport {
  std::vector<SuiteResult> suites;

  bool Passed() const;
  // Suite with the largest max_error / tolerance.
  const SuiteResult* WorstSuite() const;
};

struct GridPoint {
  ModelParams params;
  double sigma_q2;
};

std::vector<GridPoint> ValidationGridPoints(ValidationGrid grid);

ValidationReport RunValidation(const ValidationOptions& options);

void WriteReport(std::ostream& out, const ValidationReport& report);

}  // namespace dsest

#endif  // DSEST_VALIDATION_H_
