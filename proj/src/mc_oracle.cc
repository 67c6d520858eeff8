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

#include "dsest/mc_oracle.h"

#include <cmath>
#include <random>
#include <string>

#include "dsest/errors.h"
#include "dsest/protocols.h"

namespace dsest {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Row range of batch b out of kMcBatches; the last batch takes the rest.
std::pair<Eigen::Index, Eigen::Index> BatchRange(Eigen::Index n, int b) {
  const Eigen::Index size = n / kMcBatches;
  const Eigen::Index begin = b * size;
  return {begin, b + 1 == kMcBatches ? n - begin : size};
}

double BatchStderr(const std::vector<double>& values) {
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= count;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (count - 1.0) / count);
}

}  // namespace

void McConfig::Validate() const {
  if (n < 100) throw InvalidArgumentError("n", "must be >= 100");
  if (trials < 1) throw InvalidArgumentError("trials", "must be >= 1");
}

std::uint64_t TrialSeed(std::uint64_t seed, int trial) {
  return SplitMix64(seed ^ (static_cast<std::uint64_t>(trial) *
                            0x9e3779b97f4a7c15ULL));
}

Eigen::MatrixXd DrawSamples(const ModelParams& params, double sigma_q2,
                            std::int64_t n, std::uint64_t seed) {
  params.Validate();
  if (!std::isfinite(sigma_q2) || sigma_q2 < 0.0) {
    throw InvalidArgumentError("sigma_q2", "must be finite and >= 0");
  }
  if (params.k > kMaxDenseAgents) {
    throw InvalidArgumentError("k", "too many agents to simulate");
  }
  const JointLayout at(params.k);
  const int k = at.k();
  const double sx = std::sqrt(params.sigma_x2);
  const double sq = std::sqrt(sigma_q2);
  const double rh = std::sqrt(params.h);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(n, at.dim());
  Eigen::VectorXd x(k);
  for (std::int64_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (int a = 0; a < k; ++a) {
      x[a] = sx * normal(rng);
      total += x[a];
    }
    out(i, at.x1()) = x[0];
    for (int a = 0; a < k; ++a) {
      const double y = x[a] + rh * (total - x[a]) + normal(rng);
      out(i, at.y(a)) = y;
      out(i, at.u(a)) = y + sq * normal(rng);
    }
  }
  return out;
}

McEstimate SimulateTrial(const ModelParams& params, double sigma_q2,
                         std::int64_t n, std::uint64_t seed) {
  McConfig{n, seed, 1}.Validate();
  const Eigen::MatrixXd samples = DrawSamples(params, sigma_q2, n, seed);
  const JointLayout at(params.k);

  // MMSE weights of X_1 on (Y_1, U_2..U_K) from the model covariance.
  const CovMatrix model = JointCovariance(params, sigma_q2);
  std::vector<int> obs = {at.y(0)};
  for (int l = 1; l < at.k(); ++l) obs.push_back(at.u(l));
  const std::vector<int> target = {at.x1()};
  const Eigen::VectorXd weights =
      model.Block(obs).ldlt().solve(model.Block(obs, target));
  Eigen::MatrixXd obs_samples(samples.rows(), obs.size());
  for (size_t j = 0; j < obs.size(); ++j) {
    obs_samples.col(j) = samples.col(obs[j]);
  }
  const Eigen::VectorXd err =
      samples.col(at.x1()) - obs_samples * weights;
  const Eigen::ArrayXd sq = err.array().square();

  McEstimate est;
  est.d_hat = sq.mean();
  est.leakage_hat = LeakageExactFromJoint(SampleCovariance(samples));

  std::vector<double> d_batches;
  std::vector<double> leak_batches;
  for (int b = 0; b < kMcBatches; ++b) {
    const auto [begin, size] = BatchRange(samples.rows(), b);
    d_batches.push_back(sq.segment(begin, size).mean());
    try {
      leak_batches.push_back(LeakageExactFromJoint(
          SampleCovariance(samples.middleRows(begin, size))));
    } catch (const SingularMatrixError&) {
      // Batch too small to support the plug-in estimate.
    } catch (const InvalidArgumentError&) {
    }
  }
  est.d_stderr = BatchStderr(d_batches);
  // Too few usable batches: report the magnitude of the estimate itself as a
  // deliberately loose standard error.
  est.leakage_stderr = leak_batches.size() >= 2
                           ? BatchStderr(leak_batches)
                           : std::abs(est.leakage_hat);

  if (sigma_q2 > 0.0) {
    std::vector<int> order(at.k());
    for (int a = 0; a < at.k(); ++a) order[a] = a;
    est.rates_hat =
        DistributedRatesFromJoint(SampleCovariance(samples), order);
  }
  return est;
}

McEstimate Simulate(const ModelParams& params, double sigma_q2,
                    const McConfig& cfg) {
  cfg.Validate();
  McEstimate total;
  double d_var = 0.0;
  double leak_var = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    const McEstimate e =
        SimulateTrial(params, sigma_q2, cfg.n, TrialSeed(cfg.seed, t));
    total.d_hat += e.d_hat;
    total.leakage_hat += e.leakage_hat;
    d_var += e.d_stderr * e.d_stderr;
    leak_var += e.leakage_stderr * e.leakage_stderr;
    if (total.rates_hat.empty()) total.rates_hat.assign(e.rates_hat.size(), 0);
    for (size_t a = 0; a < e.rates_hat.size(); ++a) {
      total.rates_hat[a] += e.rates_hat[a];
    }
  }
  const double trials = static_cast<double>(cfg.trials);
  total.d_hat /= trials;
  total.leakage_hat /= trials;
  for (double& r : total.rates_hat) r /= trials;
  total.d_stderr = std::sqrt(d_var) / trials;
  total.leakage_stderr = std::sqrt(leak_var) / trials;
  return total;
}

CovMatrix SampleCovariance(const Eigen::MatrixXd& samples) {
  if (samples.rows() < 2) {
    throw InvalidArgumentError("samples", "need at least two rows");
  }
  const Eigen::MatrixXd centered =
      samples.rowwise() - samples.colwise().mean();
  return CovMatrix::FromMatrix((centered.transpose() * centered) /
                               static_cast<double>(samples.rows() - 1));
}

double EstimateMiFromSamples(const Eigen::MatrixXd& samples,
                             const IndexPartition& part) {
  if (samples.rows() < 10 * samples.cols()) {
    throw InvalidArgumentError(
        "samples", "need at least 10 rows per column, got " +
                       std::to_string(samples.rows()) + " x " +
                       std::to_string(samples.cols()));
  }
  return GaussianMi(SampleCovariance(samples), part);
}

}  // namespace dsest
