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

// Closed-form long-time homodyne spectrum of the driven two-level atom with
// detection, loss, thermal and dephasing channels.

#include "homodyne/linalg.hpp"
#include "homodyne/model.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace homodyne {

struct TwoLevelParams {
  double gamma = 1.0;        // line-width
  double p = 0.8;            // detected fraction
  double nbar = 0.0;         // thermal occupation
  double kd = 0.0;           // dephasing
  double omega_rabi = 0.0;   // Rabi frequency
  double delta_omega = 0.0;  // detuning omega_0 - omega
};

/// Throws Error(invalid_argument) on gamma <= 0, p outside (0,1), or
/// negative nbar, kd, omega_rabi.
void validate(const TwoLevelParams& params);

/// Drift of the Bloch vector (<s_x>, <s_y>, <s_z>) in the frame of the laser:
/// dx/dt = -A x - gamma (0, 0, 1).
class BlochMatrix {
 public:
  explicit BlochMatrix(const TwoLevelParams& params);

  const Eigen::Matrix3d& matrix() const noexcept { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }

  /// Solves (A^2 + mu^2) y = rhs.
  Eigen::Vector3d resolvent_solve(double mu, const Eigen::Vector3d& rhs) const;

  /// Smallest real part over the eigenvalues of A (positive when stable).
  double min_real_eigenvalue() const;

 private:
  Eigen::Matrix3d a_;
  Eigen::Matrix3d a2_;
};

BlochMatrix bloch_matrix(const TwoLevelParams& params);

struct Equilibrium {
  Eigen::Vector3d x;  // Bloch vector
  DensityMatrix rho;
};

/// x_eq = -gamma A^{-1} e_z, rho_eq = (1 + x_eq . sigma) / 2
Equilibrium equilibrium(const TwoLevelParams& params);

/// Bloch vector of exp(i th) s_- rho + rho exp(-i th) s_+ - Tr[s_th rho] rho.
Eigen::Vector3d tvector(double theta, const DensityMatrix& rho_eq);
Eigen::Vector3d svector(double theta);

/// Coefficient w with S^el(mu) = 2 pi w delta(mu): w = gamma p |Tr s_th rho_eq|^2.
double elastic_weight(const TwoLevelParams& params, double theta);

/// 1 + 2 gamma p (A (A^2 + mu^2)^{-1} t) . s
double inelastic_spectrum(const TwoLevelParams& params, double theta, double mu);

/// Caches A and the equilibrium for repeated evaluation on grids.
class TwoLevelSpectrum {
 public:
  explicit TwoLevelSpectrum(const TwoLevelParams& params);

  const TwoLevelParams& params() const noexcept { return params_; }
  const BlochMatrix& bloch() const noexcept { return bloch_; }
  const Equilibrium& equilibrium() const noexcept { return eq_; }

  double inelastic(double theta, double mu) const;
  std::vector<double> inelastic(double theta, std::span<const double> mu) const;
  double elastic_weight(double theta) const;

 private:
  TwoLevelParams params_;
  BlochMatrix bloch_;
  Equilibrium eq_;
};

/// Five-channel model (detected, lost, thermal in/out, dephasing) written
/// directly in the frame of the laser: H = (delta_omega/2) s_z, constant
/// drive on the lost channel, output on the detected channel. The model
/// carries a RotatingFrame at `laser_frequency` so the local oscillator is
/// locked to the laser by default.
SystemModel two_level_model(const TwoLevelParams& params, double laser_frequency = 1.0);

/// Same atom in the laboratory frame: H = (omega_0/2) s_z, laser at
/// omega_0 - delta_omega, drive switched off after `drive_cutoff`.
SystemModel two_level_lab_model(const TwoLevelParams& params, double omega0,
                                double drive_cutoff = DriveFunction::kUnbounded);

}  // namespace homodyne
