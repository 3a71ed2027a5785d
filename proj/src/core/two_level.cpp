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

#include "homodyne/two_level.hpp"

#include "homodyne/error.hpp"

#include <cmath>

namespace homodyne {

void validate(const TwoLevelParams& params) {
  const auto fail = [](const char* what) { throw Error(ErrorKind::invalid_argument, what); };
  if (!std::isfinite(params.gamma) || !std::isfinite(params.p) ||
      !std::isfinite(params.nbar) || !std::isfinite(params.kd) ||
      !std::isfinite(params.omega_rabi) || !std::isfinite(params.delta_omega)) {
    fail("two-level parameters must be finite");
  }
  if (!(params.gamma > 0.0)) fail("gamma must be positive");
  if (!(params.p > 0.0 && params.p < 1.0)) fail("p must lie in (0, 1)");
  if (params.nbar < 0.0) fail("nbar must be non-negative");
  if (params.kd < 0.0) fail("kd must be non-negative");
  if (params.omega_rabi < 0.0) fail("omega_rabi must be non-negative");
}

BlochMatrix::BlochMatrix(const TwoLevelParams& params) {
  validate(params);
  const double g = params.gamma;
  const double transverse = g * (0.5 + params.nbar + 2.0 * params.kd);
  a_ << transverse, params.delta_omega, 0.0,
        -params.delta_omega, transverse, params.omega_rabi,
        0.0, -params.omega_rabi, g * (1.0 + 2.0 * params.nbar);
  a2_ = a_ * a_;
}

Eigen::Vector3d BlochMatrix::resolvent_solve(double mu, const Eigen::Vector3d& rhs) const {
  const Eigen::Matrix3d m = a2_ + mu * mu * Eigen::Matrix3d::Identity();
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(m);
  if (!(std::abs(lu.determinant()) > 0.0)) {
    throw Error(ErrorKind::numerical, "A^2 + mu^2 is singular");
  }
  return lu.solve(rhs);
}

double BlochMatrix::min_real_eigenvalue() const {
  return Eigen::EigenSolver<Eigen::Matrix3d>(a_, false).eigenvalues().real().minCoeff();
}

BlochMatrix bloch_matrix(const TwoLevelParams& params) { return BlochMatrix(params); }

namespace {

DensityMatrix from_bloch(const Eigen::Vector3d& x) {
  ComplexMatrix rho = 0.5 * (ComplexMatrix::Identity(2, 2) + x(0) * pauli(Pauli::x) +
                             x(1) * pauli(Pauli::y) + x(2) * pauli(Pauli::z));
  return DensityMatrix(std::move(rho));
}

}  // namespace

Equilibrium equilibrium(const TwoLevelParams& params) {
  const BlochMatrix a(params);
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(a.matrix());
  if (!(std::abs(lu.determinant()) > 0.0)) {
    throw Error(ErrorKind::numerical, "Bloch matrix is singular");
  }
  const Eigen::Vector3d x = -params.gamma * lu.solve(Eigen::Vector3d::UnitZ());
  return Equilibrium{x, from_bloch(x)};
}

Eigen::Vector3d tvector(double theta, const DensityMatrix& rho_eq) {
  const ComplexMatrix& rho = rho_eq.matrix();
  const Complex phase = std::exp(Complex(0.0, theta));
  const Complex mean = (sigma_theta(theta) * rho).trace();
  const ComplexMatrix d = phase * pauli(Pauli::minus) * rho +
                          std::conj(phase) * rho * pauli(Pauli::plus) - mean * rho;
  return {(d * pauli(Pauli::x)).trace().real(), (d * pauli(Pauli::y)).trace().real(),
          (d * pauli(Pauli::z)).trace().real()};
}

Eigen::Vector3d svector(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

double elastic_weight(const TwoLevelParams& params, double theta) {
  return TwoLevelSpectrum(params).elastic_weight(theta);
}

double inelastic_spectrum(const TwoLevelParams& params, double theta, double mu) {
  return TwoLevelSpectrum(params).inelastic(theta, mu);
}

TwoLevelSpectrum::TwoLevelSpectrum(const TwoLevelParams& params)
    : params_(params), bloch_(params), eq_(homodyne::equilibrium(params)) {}

double TwoLevelSpectrum::inelastic(double theta, double mu) const {
  const Eigen::Vector3d y = bloch_.resolvent_solve(mu, tvector(theta, eq_.rho));
  return 1.0 + 2.0 * params_.gamma * params_.p * (bloch_.matrix() * y).dot(svector(theta));
}

std::vector<double> TwoLevelSpectrum::inelastic(double theta, std::span<const double> mu) const {
  const Eigen::Vector3d t = tvector(theta, eq_.rho);
  const Eigen::Vector3d s = svector(theta);
  std::vector<double> out;
  out.reserve(mu.size());
  for (double m : mu) {
    const Eigen::Vector3d y = bloch_.resolvent_solve(m, t);
    out.push_back(1.0 + 2.0 * params_.gamma * params_.p * (bloch_.matrix() * y).dot(s));
  }
  return out;
}

double TwoLevelSpectrum::elastic_weight(double theta) const {
  const double mean = (sigma_theta(theta) * eq_.rho.matrix()).trace().real();
  return params_.gamma * params_.p * mean * mean;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<ComplexMatrix> five_channels(const TwoLevelParams& p) {
  const ComplexMatrix sm = pauli(Pauli::minus);
  const ComplexMatrix sp = pauli(Pauli::plus);
  const ComplexMatrix sz = pauli(Pauli::z);
  return {std::sqrt(p.gamma * p.p) * sm, std::sqrt(p.gamma * (1.0 - p.p)) * sm,
          std::sqrt(p.gamma * p.nbar) * sm, std::sqrt(p.gamma * p.nbar) * sp,
          std::sqrt(p.gamma * p.kd) * sz};
}

// Laser amplitude on the forward channel: i Omega / (2 sqrt(gamma (1-p))).
Complex laser_amplitude(const TwoLevelParams& p) {
  return kI * p.omega_rabi / (2.0 * std::sqrt(p.gamma * (1.0 - p.p)));
}

SystemModel five_channel_skeleton(const TwoLevelParams& params) {
  SystemModel m;
  m.dim = 2;
  m.channels = five_channels(params);
  m.labels = {"detected", "forward", "thermal_emission", "thermal_absorption", "dephasing"};
  m.output_channel = 0;
  return m;
}

}  // namespace

SystemModel two_level_model(const TwoLevelParams& params, double laser_frequency) {
  validate(params);
  SystemModel m = five_channel_skeleton(params);
  m.hamiltonian = 0.5 * params.delta_omega * pauli(Pauli::z);
  if (params.omega_rabi > 0.0) {
    m.drive = DriveFunction::monochromatic({0.0, laser_amplitude(params), 0.0, 0.0, 0.0},
                                           {0.0, 0.0, 0.0, 0.0, 0.0});
  } else {
    m.drive = DriveFunction::zero(5);
  }
  m.frame = RotatingFrame{laser_frequency, -1};
  return m;
}

SystemModel two_level_lab_model(const TwoLevelParams& params, double omega0,
                                double drive_cutoff) {
  validate(params);
  const double laser = omega0 - params.delta_omega;
  if (!(laser > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "laser frequency omega0 - delta_omega must be positive");
  }
  SystemModel m = five_channel_skeleton(params);
  m.hamiltonian = 0.5 * omega0 * pauli(Pauli::z);
  m.drive = DriveFunction::monochromatic({0.0, laser_amplitude(params), 0.0, 0.0, 0.0},
                                         {0.0, laser, 0.0, 0.0, 0.0}, drive_cutoff);
  return m;
}

}  // namespace homodyne
