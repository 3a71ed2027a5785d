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

#include "homodyne/linalg.hpp"

#include "homodyne/error.hpp"

#include <cmath>
#include <string>

namespace homodyne {

ComplexVector vectorize(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw Error(ErrorKind::invalid_argument, "unvectorize: size mismatch");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool all_finite(const ComplexMatrix& x) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const Complex z = x.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double hermiticity_defect(const ComplexMatrix& x) {
  return (x - x.adjoint()).norm() / std::max(1.0, x.norm());
}

ComplexMatrix hermitize(const ComplexMatrix& x) {
  return 0.5 * (x + x.adjoint());
}

double min_eigenvalue_hermitian(const ComplexMatrix& x) {
  if (x.rows() == 2) {
    const double a = x(0, 0).real();
    const double d = x(1, 1).real();
    const double half_gap = 0.5 * (a - d);
    return 0.5 * (a + d) - std::sqrt(half_gap * half_gap + std::norm(x(0, 1)));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(x),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double operator_norm(const ComplexMatrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------

namespace {

Eigen::Index checked_root(Eigen::Index n) {
  const auto root = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n))));
  if (root * root != n) {
    throw Error(ErrorKind::invalid_argument,
                "superoperator size " + std::to_string(n) + " is not a square");
  }
  return root;
}

}  // namespace

Superoperator::Superoperator(ComplexMatrix matrix)
    : dim_(0), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::invalid_argument, "superoperator matrix must be square");
  }
  dim_ = checked_root(matrix_.rows());
}

Superoperator Superoperator::identity(Eigen::Index dim) {
  return Superoperator(ComplexMatrix::Identity(dim * dim, dim * dim));
}

Superoperator Superoperator::zero(Eigen::Index dim) {
  return Superoperator(ComplexMatrix::Zero(dim * dim, dim * dim));
}

Superoperator Superoperator::sandwich(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Superoperator(kron(b.transpose(), a));
}

Superoperator Superoperator::left(const ComplexMatrix& a) {
  return sandwich(a, ComplexMatrix::Identity(a.rows(), a.cols()));
}

Superoperator Superoperator::right(const ComplexMatrix& b) {
  return sandwich(ComplexMatrix::Identity(b.rows(), b.cols()), b);
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorKind::invalid_argument, "superoperator applied to wrong dimension");
  }
  const ComplexVector out = matrix_ * vectorize(x);
  return unvectorize(out, dim_);
}

Superoperator Superoperator::operator*(const Superoperator& rhs) const {
  return Superoperator(matrix_ * rhs.matrix_);
}

Superoperator Superoperator::operator+(const Superoperator& rhs) const {
  return Superoperator(matrix_ + rhs.matrix_);
}

Superoperator Superoperator::operator-(const Superoperator& rhs) const {
  return Superoperator(matrix_ - rhs.matrix_);
}

Superoperator& Superoperator::operator+=(const Superoperator& rhs) {
  matrix_ += rhs.matrix_;
  return *this;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::validation, "density matrix must be square and non-empty");
  }
  if (!all_finite(matrix_)) {
    throw Error(ErrorKind::validation, "density matrix has non-finite entries");
  }
  if (hermiticity_defect(matrix_) > kHermitianTol) {
    throw Error(ErrorKind::validation, "density matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorKind::validation,
                "density matrix trace " + std::to_string(tr.real()) + " is not 1");
  }
  if (min_eigenvalue_hermitian(matrix_) < -kPositivityTol) {
    throw Error(ErrorKind::validation, "density matrix is not positive");
  }
}

DensityMatrix DensityMatrix::project(const ComplexMatrix& matrix, double clip_floor) {
  if (!all_finite(matrix)) {
    throw Error(ErrorKind::numerical, "state has non-finite entries");
  }
  ComplexMatrix h = hermitize(matrix);
  h /= h.trace().real();
  const double lowest = min_eigenvalue_hermitian(h);
  if (lowest < -clip_floor) {
    throw Error(ErrorKind::numerical, "state lost positivity (eigenvalue " +
                                          std::to_string(lowest) + ")");
  }
  if (lowest < 0.0) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
    h = solver.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
        solver.eigenvectors().adjoint();
    h = hermitize(h);
    h /= h.trace().real();
  }
  return DensityMatrix(std::move(h), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorKind::invalid_argument, "zero state vector");
  const ComplexVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

}  // namespace homodyne
