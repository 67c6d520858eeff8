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

#include "dsest/validation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dsest/errors.h"
#include "dsest/gaussian_linalg.h"
#include "dsest/mc_oracle.h"
#include "dsest/outer_bounds.h"
#include "dsest/protocols.h"
#include "dsest/units.h"

namespace dsest {
namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

double RelErr(double value, double reference) {
  return std::abs(value - reference) /
         std::max(std::abs(reference), std::numeric_limits<double>::min());
}

std::string Describe(const GridPoint& g, const std::string& what) {
  std::ostringstream s;
  s << "K=" << g.params.k << " h=" << g.params.h
    << " sigma_x2=" << g.params.sigma_x2 << " sigma_q2=" << g.sigma_q2
    << ": " << what;
  return s.str();
}

class Suite {
 public:
  Suite(std::string name, double tolerance) {
    r_.name = std::move(name);
    r_.tolerance = tolerance;
  }

  void Record(double error, const std::string& where) {
    ++r_.checks;
    if (std::isnan(error)) error = std::numeric_limits<double>::infinity();
    if (r_.checks == 1 || error > r_.max_error) {
      r_.max_error = error;
      r_.worst = where;
    }
  }

  void Note(std::string note) { r_.note = std::move(note); }

  SuiteResult Finish() {
    r_.passed = r_.checks > 0 && r_.max_error <= r_.tolerance;
    return r_;
  }

 private:
  SuiteResult r_;
};

std::string FormatCoefficient(double a) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", a);
  return buf;
}

std::vector<int> Range(int begin, int end) {
  std::vector<int> v(end - begin);
  std::iota(v.begin(), v.end(), begin);
  return v;
}

SuiteResult DistortionSuite(const std::vector<GridPoint>& grid,
                            const ValidationOptions& o) {
  Suite s("distortion_vs_conditioning", o.closed_form_tolerance);
  for (const GridPoint& g : grid) {
    const JointLayout at(g.params.k);
    const CovMatrix joint = JointCovariance(g.params, g.sigma_q2);
    const std::vector<int> x1 = {at.x1()};
    const std::vector<int> y1 = {at.y(0)};
    const std::vector<int> ys = Range(at.y(0), at.y(0) + at.k());
    std::vector<int> given = {at.y(0)};
    for (int l = 1; l < at.k(); ++l) given.push_back(at.u(l));
    s.Record(RelErr(DMax(g.params), ConditionalCovariance(joint, x1, y1)(0, 0)),
             Describe(g, "d_max"));
    s.Record(RelErr(DMin(g.params) * (1.0 + o.perturb_closed_form),
                    ConditionalCovariance(joint, x1, ys)(0, 0)),
             Describe(g, "d_min"));
    s.Record(RelErr(AchievableDistortion(g.params, g.sigma_q2),
                    ConditionalCovariance(joint, x1, given)(0, 0)),
             Describe(g, "d_achievable"));
  }
  return s.Finish();
}

SuiteResult EntropyChainSuite(const std::vector<GridPoint>& grid,
                              const ValidationOptions& o) {
  Suite s("sum_rate_entropy_chain", o.closed_form_tolerance);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 == 0.0) continue;
    const JointLayout at(g.params.k);
    const CovMatrix joint = JointCovariance(g.params, g.sigma_q2);
    const double noise = 0.5 * static_cast<double>(at.k()) *
                         std::log(kTwoPiE * g.sigma_q2);
    const std::vector<int> us = Range(at.u(0), at.u(0) + at.k());
    const std::vector<int> rest(us.begin() + 1, us.end());
    const std::vector<int> y1 = {at.y(0)};
    const std::vector<int> u1 = {at.u(0)};
    const std::vector<int> y2 = {at.y(1)};
    const double chain = GaussianCondEntropy(joint, rest, y1) +
                         GaussianCondEntropy(joint, u1, y2) - noise;
    s.Record(RelErr(DistributedSumRate(g.params, g.sigma_q2), chain),
             Describe(g, "distributed sum rate"));
    const double ceo = GaussianCondEntropy(joint, us, {}) - noise;
    s.Record(RelErr(CeoSumRate(g.params, g.sigma_q2), ceo),
             Describe(g, "CEO sum rate"));
  }
  return s.Finish();
}

SuiteResult PerAgentSuite(const std::vector<GridPoint>& grid,
                          const ValidationOptions& o) {
  Suite s("per_agent_rates", o.closed_form_tolerance);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 == 0.0) continue;
    const std::vector<double> dist = DistributedRates(g.params, g.sigma_q2);
    const std::vector<double> ceo = CeoRates(g.params, g.sigma_q2);
    const std::vector<double> dist_s =
        DistributedRatesStructured(g.params, g.sigma_q2);
    const std::vector<double> ceo_s = CeoRatesStructured(g.params, g.sigma_q2);
    s.Record(RelErr(std::accumulate(dist.begin(), dist.end(), 0.0),
                    DistributedSumRate(g.params, g.sigma_q2)),
             Describe(g, "sum of distributed rates"));
    s.Record(RelErr(std::accumulate(ceo.begin(), ceo.end(), 0.0),
                    CeoSumRate(g.params, g.sigma_q2)),
             Describe(g, "sum of CEO rates"));
    for (size_t a = 0; a < dist.size(); ++a) {
      s.Record(RelErr(dist_s[a], dist[a]),
               Describe(g, "structured distributed R_" + std::to_string(a + 1)));
      s.Record(RelErr(ceo_s[a], ceo[a]),
               Describe(g, "structured CEO R_" + std::to_string(a + 1)));
    }
  }
  return s.Finish();
}

SuiteResult OrderingSuite(const std::vector<GridPoint>& grid) {
  // Metric: 1 for a violated strict inequality, 0 otherwise.
  Suite s("ceo_exceeds_distributed", 0.0);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 == 0.0 || ComputeMoments(g.params).beta == 0.0) continue;
    const ProtocolComparison c = CompareProtocols(g.params, g.sigma_q2);
    s.Record(c.gap > 0.0 ? 0.0 : 1.0, Describe(g, "gap <= 0"));
  }
  const GridPoint big{ModelParams::Create(100000, 0.5, 1.0), 6.0};
  const double per_user_bits =
      ToUnits(CompareProtocols(big.params, big.sigma_q2).per_user_gap,
              Units::kBits);
  s.Record(per_user_bits < 1e-3 ? 0.0 : 1.0,
           Describe(big, "per-user gap >= 1e-3 bits"));
  return s.Finish();
}

SuiteResult EncodingSuite(const std::vector<GridPoint>& grid,
                          const ValidationOptions& o) {
  Suite s("encoding_equivalence", o.closed_form_tolerance);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 == 0.0 || g.params.k > 8) continue;
    for (const EncodingEquivalence& e :
         EncodingEquivalenceCheck(g.params, g.sigma_q2)) {
      s.Record(e.MaxRelativeMismatch(),
               Describe(g, "a=" + FormatCoefficient(e.coefficient)));
    }
  }
  return s.Finish();
}

SuiteResult LeakageSuite(const std::vector<GridPoint>& grid,
                         const ValidationOptions& o) {
  Suite s("leakage_exact", o.leakage_tolerance);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 == 0.0) {
      s.Record(RelErr(LeakageExact(g.params, 0.0),
                      0.5 * std::log(g.params.sigma_x2 / DMin(g.params))),
               Describe(g, "leakage_exact(0) vs 1/2 log(sigma_x2/d_min)"));
    }
    s.Record(RelErr(LeakageExactStructured(g.params, g.sigma_q2),
                    LeakageExact(g.params, g.sigma_q2)),
             Describe(g, "structured vs dense leakage"));
  }
  return s.Finish();
}

SuiteResult LeakageFormulaSuite(const std::vector<GridPoint>& grid,
                                const ValidationOptions& o) {
  Suite s("leakage_formula_identity", o.formula_tolerance);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 != 0.0) continue;
    s.Record(RelErr(LeakageFormula(g.params),
                    0.5 * std::log(g.params.sigma_x2 / DMin(g.params))),
             Describe(g, "leakage_formula vs 1/2 log(sigma_x2/d_min)"));
  }
  return s.Finish();
}

SuiteResult OuterBoundSuite(const std::vector<GridPoint>& grid,
                            const ValidationOptions& o) {
  // Metric: bound minus achievable value (nats); must not be positive.
  Suite s("outer_bounds", o.outer_tolerance);
  std::int64_t outside = 0;
  for (const GridPoint& g : grid) {
    const EstimatorCalibration c = CalibrateAtSigmaQ2(g.params, g.sigma_q2);
    if (g.sigma_q2 > 0.0) {
      try {
        const double r1 =
            DistributedRatesStructured(g.params, g.sigma_q2).front();
        s.Record(RateOuterBound(g.params, c) - r1,
                 Describe(g, "rate bound above R_1"));
      } catch (const OutsideValidityError&) {
        ++outside;
      }
    }
    try {
      s.Record(LeakageOuterBound(g.params, c) -
                   LeakageExactStructured(g.params, g.sigma_q2),
               Describe(g, "leakage bound above leakage_exact"));
    } catch (const OutsideValidityError&) {
      ++outside;
    }
  }
  s.Note(std::to_string(outside) + " bound evaluations outside validity");
  return s.Finish();
}

SuiteResult RoundTripSuite(const std::vector<GridPoint>& grid,
                           const ValidationOptions& o) {
  Suite s("sigma_q2_roundtrip", o.roundtrip_tolerance);
  for (const GridPoint& g : grid) {
    if (g.sigma_q2 == 0.0) continue;
    if (DMax(g.params) - DMin(g.params) <= 1e-12 * DMax(g.params)) continue;
    const double d = AchievableDistortion(g.params, g.sigma_q2);
    s.Record(RelErr(SigmaQ2ForDistortion(g.params, d), g.sigma_q2),
             Describe(g, "sigma_q2 round trip"));
  }
  return s.Finish();
}

SuiteResult MonteCarloSuite(ValidationGrid grid, const ValidationOptions& o) {
  // Metric: |estimate - closed form| / max(k stderr, relative floor).
  Suite s("monte_carlo", 1.0);
  std::vector<GridPoint> points = {
      {ModelParams::Create(5, 0.5, 1.0), 6.0},
      {ModelParams::Create(3, 0.5, 1.0), 0.0},
  };
  if (grid == ValidationGrid::kFull) {
    points.push_back({ModelParams::Create(2, 1.0, 2.0), 1.0});
    points.push_back({ModelParams::Create(8, 0.25, 0.5), 100.0});
  }
  McConfig cfg;
  cfg.n = o.mc_samples;
  cfg.seed = o.seed;
  for (const GridPoint& g : points) {
    const McEstimate e = Simulate(g.params, g.sigma_q2, cfg);
    const double d = AchievableDistortion(g.params, g.sigma_q2);
    const double l = LeakageExactStructured(g.params, g.sigma_q2);
    s.Record(std::abs(e.d_hat - d) /
                 std::max(o.mc_sigmas * e.d_stderr,
                          o.mc_distortion_relative * d),
             Describe(g, "distortion"));
    s.Record(std::abs(e.leakage_hat - l) /
                 std::max(o.mc_sigmas * e.leakage_stderr,
                          o.mc_leakage_relative * l),
             Describe(g, "leakage"));
  }
  if (o.mc_samples < 10000) {
    s.Note("warning: under-sampled (" + std::to_string(o.mc_samples) +
           " samples); thresholds rest on noisy standard errors");
  }
  return s.Finish();
}

}  // namespace

bool ValidationReport::Passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& r) { return r.passed; });
}

const SuiteResult* ValidationReport::WorstSuite() const {
  auto ratio = [](const SuiteResult& r) {
    if (r.tolerance > 0.0) return r.max_error / r.tolerance;
    return r.max_error > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  const SuiteResult* worst = nullptr;
  for (const SuiteResult& r : suites) {
    if (worst == nullptr || (worst->passed && !r.passed) ||
        (worst->passed == r.passed && ratio(r) > ratio(*worst))) {
      worst = &r;
    }
  }
  return worst;
}

std::vector<GridPoint> ValidationGridPoints(ValidationGrid grid) {
  std::vector<std::int64_t> ks;
  std::vector<double> hs;
  std::vector<double> sigmas;
  if (grid == ValidationGrid::kFull) {
    for (std::int64_t k = 2; k <= 40; ++k) ks.push_back(k);
    hs = {0.1, 0.25, 0.5, 1.0, 2.0};
    sigmas = {0.5, 1.0, 2.0};
  } else {
    ks = {2, 3, 4, 5, 8};
    hs = {0.25, 0.5, 1.0};
    sigmas = {0.5, 1.0};
  }
  const double qs[] = {0.0, 1.0, 6.0, 100.0};
  std::vector<GridPoint> points;
  for (const std::int64_t k : ks) {
    for (const double h : hs) {
      for (const double s : sigmas) {
        for (const double q : qs) {
          points.push_back({ModelParams::Create(k, h, s), q});
        }
      }
    }
  }
  return points;
}

ValidationReport RunValidation(const ValidationOptions& options) {
  if (options.mc_samples < 100) {
    throw InvalidArgumentError("mc_samples", "must be >= 100");
  }
  const std::vector<GridPoint> grid = ValidationGridPoints(options.grid);
  ValidationReport report;
  report.suites.push_back(DistortionSuite(grid, options));
  report.suites.push_back(EntropyChainSuite(grid, options));
  report.suites.push_back(PerAgentSuite(grid, options));
  report.suites.push_back(OrderingSuite(grid));
  report.suites.push_back(EncodingSuite(grid, options));
  report.suites.push_back(LeakageSuite(grid, options));
  report.suites.push_back(LeakageFormulaSuite(grid, options));
  report.suites.push_back(OuterBoundSuite(grid, options));
  report.suites.push_back(RoundTripSuite(grid, options));
  report.suites.push_back(MonteCarloSuite(options.grid, options));
  return report;
}

void WriteReport(std::ostream& out, const ValidationReport& report) {
  char buf[64];
  for (const SuiteResult& r : report.suites) {
    std::snprintf(buf, sizeof(buf), "%.3e (tol %.3e)", r.max_error,
                  r.tolerance);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  max_error=" << buf
        << "  checks=" << r.checks << "  worst: " << r.worst << '\n';
    if (!r.note.empty()) out << "     " << r.note << '\n';
  }
  if (report.Passed()) {
    out << "all " << report.suites.size() << " suites passed\n";
  } else {
    const SuiteResult* w = report.WorstSuite();
    out << "validation failed; worst offender: " << w->name << " at "
        << w->worst << '\n';
  }
}

}  // namespace dsest
