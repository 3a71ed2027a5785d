// Copyright 2026 The homodyne authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra shared by every module: operators on the
// system Hilbert space, superoperators on column-stacked density matrices,
// and the validated density-matrix type.

#include <Eigen/Dense>

#include <complex>

namespace homodyne {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Column-stacking vectorization, vec(AXB) = (B^T kron A) vec(X).
ComplexVector vectorize(const ComplexMatrix& x);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& x);

/// ||X - X^dagger||_F / max(1, ||X||_F).
double hermiticity_defect(const ComplexMatrix& x);
ComplexMatrix hermitize(const ComplexMatrix& x);
double min_eigenvalue_hermitian(const ComplexMatrix& x);
double operator_norm(const ComplexMatrix& x);

/// Linear map on dim x dim matrices, stored as a dense dim^2 x dim^2 matrix
/// acting on column-stacked vectors.
class Superoperator {
 public:
  explicit Superoperator(ComplexMatrix matrix);

  static Superoperator identity(Eigen::Index dim);
  static Superoperator zero(Eigen::Index dim);
  /// X -> A X B
  static Superoperator sandwich(const ComplexMatrix& a, const ComplexMatrix& b);
  static Superoperator left(const ComplexMatrix& a);
  static Superoperator right(const ComplexMatrix& b);

  Eigen::Index dim() const noexcept { return dim_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;

  Superoperator operator*(const Superoperator& rhs) const;  // composition
  Superoperator operator+(const Superoperator& rhs) const;
  Superoperator operator-(const Superoperator& rhs) const;
  Superoperator& operator+=(const Superoperator& rhs);

 private:
  Eigen::Index dim_;
  ComplexMatrix matrix_;
};

/// Positive, unit-trace, Hermitian matrix. Construction validates.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPositivityTol = 1e-10;

  /// Throws Error(validation) if any invariant fails.
  explicit DensityMatrix(ComplexMatrix matrix);

  /// Hermitizes, clips eigenvalues in (-clip_floor, 0) to zero and
  /// renormalizes the trace. Throws Error(numerical) if the most negative
  /// eigenvalue is below -clip_floor.
  static DensityMatrix project(const ComplexMatrix& matrix, double clip_floor);

  static DensityMatrix pure(const ComplexVector& psi);

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix matrix, Unchecked) : matrix_(std::move(matrix)) {}

  ComplexMatrix matrix_;
};

}  // namespace homodyne
