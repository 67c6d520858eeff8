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

#include "dsest/gaussian_linalg.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_set>

#include "dsest/errors.h"

namespace dsest {
namespace {

std::string FormatIndices(std::span<const int> indices) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) out << ", ";
    out << indices[i];
  }
  out << "]";
  return out.str();
}

void CheckIndices(std::span<const int> indices, int dim, const char* field) {
  std::unordered_set<int> seen;
  for (int i : indices) {
    if (i < 0 || i >= dim) {
      throw InvalidArgumentError(field, "index " + std::to_string(i) +
                                            " outside [0, " +
                                            std::to_string(dim) + ")");
    }
    if (!seen.insert(i).second) {
      throw InvalidArgumentError(field,
                                 "duplicate index " + std::to_string(i));
    }
  }
}

// Pivoted LDL^T of `m`; throws if any pivot is too small relative to the
// largest one.
Eigen::LDLT<Eigen::MatrixXd> FactorSpd(const Eigen::MatrixXd& m,
                                       std::span<const int> labels) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double largest = d.cwiseAbs().maxCoeff();
  std::vector<int> bad;
  if (!(largest > 0.0) || !std::isfinite(largest)) {
    bad.assign(labels.begin(), labels.end());
  } else {
    // Row i of the factor corresponds to original row perm[i].
    Eigen::VectorXi perm = Eigen::VectorXi::LinSpaced(m.rows(), 0,
                                                      m.rows() - 1);
    perm = ldlt.transpositionsP() * perm;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!(d(i) > kPivotTolerance * largest)) {
        bad.push_back(labels[perm(i)]);
      }
    }
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    throw SingularMatrixError(
        bad, "singular block over indices " + FormatIndices(labels) +
                 "; degenerate pivots at " + FormatIndices(bad));
  }
  return ldlt;
}

}  // namespace

CovMatrix CovMatrix::FromMatrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw InvalidArgumentError("joint", "covariance must be square, dim >= 1");
  }
  if (!entries.allFinite()) {
    throw InvalidArgumentError("joint", "covariance has non-finite entries");
  }
  const double scale = entries.cwiseAbs().maxCoeff();
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw InvalidArgumentError("joint", "covariance is not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (entries + entries.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -kPsdTolerance * largest) {
    throw InvalidArgumentError("joint",
                               "covariance is not positive semidefinite");
  }
  return CovMatrix(std::move(sym));
}

CovMatrix CovMatrix::FromMatrixUnchecked(Eigen::MatrixXd entries) {
  return CovMatrix(std::move(entries));
}

Eigen::MatrixXd CovMatrix::Block(std::span<const int> indices) const {
  return Block(indices, indices);
}

Eigen::MatrixXd CovMatrix::Block(std::span<const int> rows,
                                 std::span<const int> cols) const {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) {
      out(i, j) = entries_(rows[i], cols[j]);
    }
  }
  return out;
}

void IndexPartition::Validate(int dim) const {
  CheckIndices(left, dim, "left");
  CheckIndices(right, dim, "right");
  CheckIndices(conditioning, dim, "conditioning");
  std::unordered_set<int> all;
  for (const auto* list : {&left, &right, &conditioning}) {
    for (int i : *list) {
      if (!all.insert(i).second) {
        throw InvalidArgumentError(
            "partition", "index " + std::to_string(i) +
                             " appears in more than one list");
      }
    }
  }
}

CovMatrix ConditionalCovariance(const CovMatrix& joint,
                                std::span<const int> targets,
                                std::span<const int> given) {
  CheckIndices(targets, joint.dim(), "targets");
  CheckIndices(given, joint.dim(), "given");
  Eigen::MatrixXd kaa = joint.Block(targets);
  if (given.empty()) return CovMatrix::FromMatrixUnchecked(std::move(kaa));

  const Eigen::MatrixXd kbb = joint.Block(given);
  const Eigen::MatrixXd kab = joint.Block(targets, given);
  const auto ldlt = FactorSpd(kbb, given);
  Eigen::MatrixXd cond = kaa - kab * ldlt.solve(kab.transpose());
  cond = 0.5 * (cond + cond.transpose());
  return CovMatrix::FromMatrixUnchecked(std::move(cond));
}

double ToeplitzDet(double a, double b, std::int64_t k) {
  if (k < 1) throw InvalidArgumentError("k", "must be >= 1");
  return (a + static_cast<double>(k - 1) * b) *
         std::pow(a - b, static_cast<double>(k - 1));
}

double F1(double alpha, double beta, double k, double c) {
  return alpha + (k - 2.0) * beta - (k - 1.0) * c;
}

double LogDetSpd(const Eigen::MatrixXd& m, std::span<const int> labels) {
  const auto ldlt = FactorSpd(m, labels);
  return ldlt.vectorD().array().log().sum();
}

double GaussianMi(const CovMatrix& joint, const IndexPartition& part) {
  part.Validate(joint.dim());
  if (part.left.empty() || part.right.empty()) return 0.0;

  std::vector<int> both = part.left;
  both.insert(both.end(), part.right.begin(), part.right.end());
  const CovMatrix cond =
      ConditionalCovariance(joint, both, part.conditioning);

  const int nl = static_cast<int>(part.left.size());
  const int nr = static_cast<int>(part.right.size());
  const Eigen::MatrixXd& c = cond.entries();
  const double ld_left = LogDetSpd(c.topLeftCorner(nl, nl), part.left);
  const double ld_right = LogDetSpd(c.bottomRightCorner(nr, nr), part.right);
  const double ld_both = LogDetSpd(c, both);
  return std::max(0.0, 0.5 * (ld_left + ld_right - ld_both));
}

double GaussianCondEntropy(const CovMatrix& joint,
                           std::span<const int> targets,
                           std::span<const int> given) {
  if (targets.empty()) return 0.0;
  const CovMatrix cond = ConditionalCovariance(joint, targets, given);
  const double m = static_cast<double>(targets.size());
  return 0.5 * (m * std::log(2.0 * std::numbers::pi * std::numbers::e) +
                LogDetSpd(cond.entries(), targets));
}

}  // namespace dsest
