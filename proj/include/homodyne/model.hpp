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

#include "homodyne/linalg.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace homodyne {

/// Coherent drive on each field channel: f_k(t) = c_k exp(-i w_k t) on
/// [0, cutoff], zero afterwards.
class DriveFunction {
 public:
  enum class Kind { zero, coherent_monochromatic };

  static constexpr double kUnbounded = std::numeric_limits<double>::max();

  static DriveFunction zero(std::size_t channels);
  static DriveFunction monochromatic(std::vector<Complex> amplitudes,
                                     std::vector<double> frequencies,
                                     double cutoff = kUnbounded);

  Kind kind() const noexcept { return kind_; }
  std::size_t channels() const noexcept { return amplitudes_.size(); }
  Complex amplitude(std::size_t k) const { return amplitudes_.at(k); }
  double frequency(std::size_t k) const { return frequencies_.at(k); }
  double cutoff() const noexcept { return cutoff_; }

  Complex value(std::size_t k, double t) const;
  ComplexVector values(double t) const;

  /// True when every active channel is constant on [0, horizon].
  bool constant_on(double horizon) const;
  bool is_zero() const;

 private:
  Kind kind_ = Kind::zero;
  std::vector<Complex> amplitudes_;
  std::vector<double> frequencies_;
  double cutoff_ = kUnbounded;
};

/// Set on models produced by rotating_frame(): the frame rotates at `omega`
/// generated by (omega/2) sigma_z, and the output channel operator picks up
/// exp(i * output_charge * omega * t) in that frame.
struct RotatingFrame {
  double omega = 0.0;
  int output_charge = 0;
};

struct SystemModel {
  Eigen::Index dim = 0;
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> channels;
  std::vector<std::string> labels;
  /// Row-major d x d blocks S_kl; empty means S_kl = delta_kl * 1.
  std::vector<ComplexMatrix> scattering;
  DriveFunction drive;
  std::size_t output_channel = 0;
  std::optional<RotatingFrame> frame;

  std::size_t channel_count() const noexcept { return channels.size(); }
  bool identity_scattering() const noexcept { return scattering.empty(); }
  ComplexMatrix scattering_block(std::size_t k, std::size_t l) const;
};

struct Violation {
  std::string what;
  double norm = 0.0;
};

/// Empty result means valid.
std::vector<Violation> validate_model(const SystemModel& model);

/// Throws Error(validation) listing every violation.
void require_valid(const SystemModel& model);

/// K = -iH - 1/2 sum_k R_k^* R_k
ComplexMatrix effective_drift(const SystemModel& model);

/// General Liouvillian with scattering and drive at time t.
Superoperator build_liouvillian(const SystemModel& model, double t);

/// Lindblad form valid for S_kl = delta_kl: commutator with the drive-dressed
/// Hamiltonian plus dissipators. Independent construction used to cross-check
/// build_liouvillian; throws if the model has non-trivial scattering.
Superoperator lindblad_liouvillian(const SystemModel& model, double t);

/// Dressed Hamiltonian H - i sum_k f_k R_k^* + i sum_k conj(f_k) R_k.
ComplexMatrix dressed_hamiltonian(const SystemModel& model, double t);

/// Operator R_k0 + sum_l S_k0,l f_l(t) of the output channel.
ComplexMatrix output_channel_operator(const SystemModel& model, double t);

/// True when L(t) is constant on [0, horizon].
bool liouvillian_constant_on(const SystemModel& model, double horizon);

// Two-level operators in the basis |e> = (1,0), |g> = (0,1).
enum class Pauli { x, y, z, plus, minus };
ComplexMatrix pauli(Pauli which);
/// exp(i theta) sigma_- + exp(-i theta) sigma_+
ComplexMatrix sigma_theta(double theta);

/// Moves a two-level model into the frame rotating at omega. Requires a
/// diagonal Hamiltonian, identity scattering, channel operators proportional
/// to sigma_-, sigma_+ or diagonal, and drive frequencies matching the
/// rotation of the channel they act on.
SystemModel rotating_frame(const SystemModel& model, double omega);

}  // namespace homodyne
