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

#ifndef DSEST_GAUSSIAN_LINALG_H_
#define DSEST_GAUSSIAN_LINALG_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dsest {

// Relative pivot tolerance below which a block is treated as singular.
inline constexpr double kPivotTolerance = 1e-12;
// Relative tolerance of the symmetry check in CovMatrix::FromMatrix.
inline constexpr double kSymmetryTolerance = 1e-12;
// Smallest admissible eigenvalue, relative to the largest.
inline constexpr double kPsdTolerance = 1e-9;

// A symmetric positive-semidefinite covariance matrix over jointly Gaussian,
// zero-mean variables addressed by integer index.
class CovMatrix {
 public:
  // Validates symmetry and positive semidefiniteness; throws
  // InvalidArgumentError otherwise. The stored matrix is exactly symmetrized.
  static CovMatrix FromMatrix(Eigen::MatrixXd entries);

  // Skips validation. Only for matrices that are symmetric PSD by
  // construction (e.g. A D A^T with D >= 0).
  static CovMatrix FromMatrixUnchecked(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  // Principal sub-block selected by `indices`, in the given order.
  Eigen::MatrixXd Block(std::span<const int> indices) const;
  Eigen::MatrixXd Block(std::span<const int> rows,
                        std::span<const int> cols) const;

 private:
  explicit CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  Eigen::MatrixXd entries_;
};

// Index sets for I(left; right | conditioning).
struct IndexPartition {
  std::vector<int> left;
  std::vector<int> right;
  std::vector<int> conditioning;

  // Throws InvalidArgumentError unless every index lies in [0, dim), each
  // list has distinct entries, and the three lists are pairwise disjoint.
  void Validate(int dim) const;
};

// E[var(A | B)] = K_AA - K_AB K_BB^{-1} K_AB^T. With `given` empty the
// targets block is returned unchanged. Throws SingularMatrixError naming the
// offending indices when the `given` block is singular.
CovMatrix ConditionalCovariance(const CovMatrix& joint,
                                std::span<const int> targets,
                                std::span<const int> given);

// Determinant of the k x k matrix with `a` on the diagonal and `b` elsewhere:
// (a + (k-1) b) (a - b)^(k-1). O(1) in k.
double ToeplitzDet(double a, double b, std::int64_t k);

// alpha + (k-2) beta - (k-1) c.
double F1(double alpha, double beta, double k, double c);

// log det of a symmetric positive-definite matrix through a pivoted LDL^T
// factorization. `labels` (same length as the matrix) identifies rows in the
// SingularMatrixError thrown when a pivot is <= kPivotTolerance * largest.
double LogDetSpd(const Eigen::MatrixXd& m, std::span<const int> labels);

// I(left; right | conditioning) in nats for jointly Gaussian variables.
double GaussianMi(const CovMatrix& joint, const IndexPartition& part);

// h(targets | given) in nats: 1/2 log((2 pi e)^m |Sigma_{targets|given}|).
double GaussianCondEntropy(const CovMatrix& joint,
                           std::span<const int> targets,
                           std::span<const int> given);

}  // namespace dsest

#endif  // DSEST_GAUSSIAN_LINALG_H_
