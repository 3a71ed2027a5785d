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

// Model builders and independent reference computations shared by the tests.

#include "homodyne/evolution.hpp"
#include "homodyne/linalg.hpp"
#include "homodyne/model.hpp"
#include "homodyne/spectrum.hpp"
#include "homodyne/two_level.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

using homodyne::Complex;
using homodyne::ComplexMatrix;
using homodyne::ComplexVector;
using homodyne::DensityMatrix;
using homodyne::SystemModel;

inline constexpr double kPi = std::numbers::pi;

inline homodyne::TwoLevelParams fig1_params() {
  homodyne::TwoLevelParams p;
  p.delta_omega = 3.5;
  p.omega_rabi = 3.7021;
  return p;
}

inline homodyne::TwoLevelParams fig2_params() {
  homodyne::TwoLevelParams p;
  p.delta_omega = 0.0;
  p.omega_rabi = 0.2976;
  return p;
}

inline homodyne::TwoLevelParams undriven_params() { return homodyne::TwoLevelParams{}; }

inline ComplexMatrix excited() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

inline ComplexMatrix ground() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

/// H = 0, one channel sqrt(gamma) sigma_-, no drive.
inline SystemModel pure_decay(double gamma = 1.0) {
  SystemModel m;
  m.dim = 2;
  m.hamiltonian = ComplexMatrix::Zero(2, 2);
  m.channels = {std::sqrt(gamma) * homodyne::pauli(homodyne::Pauli::minus)};
  m.labels = {"decay"};
  m.drive = homodyne::DriveFunction::zero(1);
  return m;
}

/// Dimension d, no channels and zero Hamiltonian.
inline SystemModel frozen(Eigen::Index d) {
  SystemModel m;
  m.dim = d;
  m.hamiltonian = ComplexMatrix::Zero(d, d);
  m.drive = homodyne::DriveFunction::zero(0);
  return m;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = {n(rng), n(rng)};
  return scale * m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  const ComplexMatrix m = random_matrix(rng, d, scale);
  return 0.5 * (m + m.adjoint());
}

inline DensityMatrix random_state(std::mt19937_64& rng, Eigen::Index d) {
  const ComplexMatrix g = random_matrix(rng, d);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(homodyne::hermitize(rho));
}

/// Random unitary from the QR factor of a Gaussian matrix.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, d));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

/// dim <= 4, channels <= 3, ||R|| <= 2, constant drive on channel 0.
inline SystemModel random_model(std::mt19937_64& rng, bool with_scattering = false) {
  std::uniform_int_distribution<int> dims(2, 4), chans(1, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Index d = dims(rng);
  const std::size_t k = static_cast<std::size_t>(chans(rng));
  SystemModel m;
  m.dim = d;
  m.hamiltonian = random_hermitian(rng, d);
  for (std::size_t c = 0; c < k; ++c) {
    ComplexMatrix r = random_matrix(rng, d);
    r *= 2.0 * std::abs(u(rng)) / homodyne::operator_norm(r);
    m.channels.push_back(r);
    m.labels.push_back("c" + std::to_string(c));
  }
  std::vector<Complex> amps(k, 0.0);
  amps[0] = {u(rng), u(rng)};
  m.drive = homodyne::DriveFunction::monochromatic(amps, std::vector<double>(k, 0.0));
  if (with_scattering) {
    // S_kl = U_kl * 1 for a random k x k unitary U.
    const ComplexMatrix unitary = random_unitary(rng, static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        m.scattering.push_back(unitary(a, b) * ComplexMatrix::Identity(d, d));
  }
  return m;
}

/// O(N^2) trapezoidal evaluation of
///   1 + (2/T) int_0^T dt int_0^t ds cos mu(t-s) k(t, s)
/// with k built from explicit propagators exp(L h)^n and explicitly evolved
/// states, for time-independent L. Only the phase exp(i(rate t + theta)) is
/// time dependent.
inline std::vector<double> brute_force_inelastic(const SystemModel& model,
                                                 const homodyne::QuadratureParams& params,
                                                 const DensityMatrix& rho0, double horizon,
                                                 std::size_t n, const std::vector<double>& mu) {
  const double h = horizon / double(n);
  const ComplexMatrix step = homodyne::exponential(homodyne::build_liouvillian(model, 0.0), h).matrix();
  const Eigen::Index d = model.dim;
  const double rate = homodyne::output_phase_rate(model, params);
  const ComplexMatrix m = homodyne::output_channel_operator(model, 0.0);

  std::vector<ComplexMatrix> eta(n + 1);
  ComplexVector v = homodyne::vectorize(rho0.matrix());
  for (std::size_t j = 0; j <= n; ++j) {
    eta[j] = homodyne::unvectorize(v, d);
    v = step * v;
  }
  auto centered = [&](std::size_t j) {
    const ComplexMatrix z = std::exp(Complex(0.0, rate * h * double(j) + params.theta)) * m;
    return ComplexMatrix(z - (z * eta[j]).trace() * ComplexMatrix::Identity(d, d));
  };
  // kernel[j][i] for s_i <= t_j
  std::vector<std::vector<double>> kernel(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const ComplexMatrix zs = centered(i);
    ComplexVector w = homodyne::vectorize(zs * eta[i] + eta[i] * zs.adjoint());
    for (std::size_t j = i; j <= n; ++j) {
      const ComplexMatrix zt = centered(j);
      kernel[j].resize(n + 1);
      kernel[j][i] = ((zt + zt.adjoint()) * homodyne::unvectorize(w, d)).trace().real();
      w = step * w;
    }
  }
  auto weight = [&](std::size_t a, std::size_t len) {
    return (a == 0 || a == len) ? 0.5 * h : h;
  };
  std::vector<double> out;
  for (double f : mu) {
    double outer = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      double inner = 0.0;
      for (std::size_t i = 0; i <= j; ++i) {
        inner += weight(i, j) * std::cos(f * h * double(j - i)) * kernel[j][i];
      }
      if (j == 0) inner = 0.0;
      outer += weight(j, n) * inner;
    }
    out.push_back(1.0 + 2.0 * outer / horizon);
  }
  return out;
}

/// Pauli-expansion expectations (Tr sigma_x rho, Tr sigma_y rho, Tr sigma_z rho)
/// written out entry by entry.
inline Eigen::Vector3d bloch_of(const ComplexMatrix& x) {
  // sigma_x = [[0,1],[1,0]], sigma_y = i(s_- - s_+) = [[0,-i],[i,0]], sigma_z = diag(1,-1)
  const Complex tx = x(1, 0) + x(0, 1);
  const Complex ty = Complex(0, -1) * x(1, 0) + Complex(0, 1) * x(0, 1);
  const Complex tz = x(0, 0) - x(1, 1);
  return {tx.real(), ty.real(), tz.real()};
}

}  // namespace testing
