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

#include "homodyne/model.hpp"

#include "homodyne/error.hpp"

#include <cmath>
#include <sstream>

namespace homodyne {

DriveFunction DriveFunction::zero(std::size_t channels) {
  DriveFunction f;
  f.kind_ = Kind::zero;
  f.amplitudes_.assign(channels, Complex{});
  f.frequencies_.assign(channels, 0.0);
  return f;
}

DriveFunction DriveFunction::monochromatic(std::vector<Complex> amplitudes,
                                           std::vector<double> frequencies,
                                           double cutoff) {
  if (amplitudes.size() != frequencies.size()) {
    throw Error(ErrorKind::invalid_argument,
                "drive amplitudes and frequencies differ in length");
  }
  if (!(cutoff > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "drive cutoff must be positive");
  }
  DriveFunction f;
  f.kind_ = Kind::coherent_monochromatic;
  f.amplitudes_ = std::move(amplitudes);
  f.frequencies_ = std::move(frequencies);
  f.cutoff_ = cutoff;
  return f;
}

Complex DriveFunction::value(std::size_t k, double t) const {
  if (kind_ == Kind::zero || t < 0.0 || t > cutoff_) return {};
  const Complex c = amplitudes_.at(k);
  if (c == Complex{}) return {};
  const double w = frequencies_[k];
  return w == 0.0 ? c : c * std::exp(Complex(0.0, -w * t));
}

ComplexVector DriveFunction::values(double t) const {
  ComplexVector out(static_cast<Eigen::Index>(amplitudes_.size()));
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = value(k, t);
  }
  return out;
}

bool DriveFunction::is_zero() const {
  if (kind_ == Kind::zero) return true;
  for (const Complex& c : amplitudes_) {
    if (c != Complex{}) return false;
  }
  return true;
}

bool DriveFunction::constant_on(double horizon) const {
  if (is_zero()) return true;
  if (cutoff_ < horizon) return false;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
    if (amplitudes_[k] != Complex{} && frequencies_[k] != 0.0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

ComplexMatrix SystemModel::scattering_block(std::size_t k, std::size_t l) const {
  if (scattering.empty()) {
    if (k == l) return ComplexMatrix::Identity(dim, dim);
    return ComplexMatrix::Zero(dim, dim);
  }
  return scattering.at(k * channels.size() + l);
}

namespace {

std::string shape_name(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

ComplexMatrix block_scattering(const SystemModel& model) {
  const auto d = static_cast<Eigen::Index>(model.channel_count());
  ComplexMatrix big(d * model.dim, d * model.dim);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l < d; ++l) {
      big.block(k * model.dim, l * model.dim, model.dim, model.dim) =
          model.scattering_block(std::size_t(k), std::size_t(l));
    }
  }
  return big;
}

}  // namespace

std::vector<Violation> validate_model(const SystemModel& model) {
  std::vector<Violation> out;
  if (model.dim <= 0) {
    out.push_back({"dimension must be positive", double(model.dim)});
    return out;
  }
  const auto square = [&](const ComplexMatrix& m) {
    return m.rows() == model.dim && m.cols() == model.dim;
  };
  bool shapes_ok = true;
  if (!square(model.hamiltonian)) {
    out.push_back({"hamiltonian has shape " + shape_name(model.hamiltonian), 0.0});
    shapes_ok = false;
  }
  for (std::size_t k = 0; k < model.channels.size(); ++k) {
    if (!square(model.channels[k])) {
      out.push_back({"channel " + std::to_string(k + 1) + " has shape " +
                         shape_name(model.channels[k]),
                     0.0});
      shapes_ok = false;
    }
  }
  const std::size_t d = model.channel_count();
  if (!model.scattering.empty()) {
    if (model.scattering.size() != d * d) {
      out.push_back({"scattering needs d*d blocks", double(model.scattering.size())});
      shapes_ok = false;
    } else {
      for (const auto& block : model.scattering) {
        if (!square(block)) {
          out.push_back({"scattering block has shape " + shape_name(block), 0.0});
          shapes_ok = false;
          break;
        }
      }
    }
  }
  if (!model.labels.empty() && model.labels.size() != d) {
    out.push_back({"label count differs from channel count", double(model.labels.size())});
  }
  if (model.drive.channels() != d) {
    out.push_back({"drive channel count differs from channel count",
                   double(model.drive.channels())});
  }
  if (d > 0 && model.output_channel >= d) {
    out.push_back({"output channel out of range", double(model.output_channel + 1)});
  }
  if (!shapes_ok) return out;

  bool finite = all_finite(model.hamiltonian);
  for (const auto& r : model.channels) finite = finite && all_finite(r);
  for (const auto& s : model.scattering) finite = finite && all_finite(s);
  for (std::size_t k = 0; k < model.drive.channels(); ++k) {
    const Complex c = model.drive.amplitude(k);
    finite = finite && std::isfinite(c.real()) && std::isfinite(c.imag()) &&
             std::isfinite(model.drive.frequency(k));
  }
  if (!finite) {
    out.push_back({"non-finite entries", 0.0});
    return out;
  }

  const double herm = (model.hamiltonian - model.hamiltonian.adjoint()).norm() /
                      std::max(1.0, model.hamiltonian.norm());
  if (herm > 1e-12) out.push_back({"H not Hermitian", herm});

  if (!model.scattering.empty()) {
    const ComplexMatrix big = block_scattering(model);
    const auto n = big.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    const double co = operator_norm(big * big.adjoint() - eye);
    if (co > 1e-10) out.push_back({"S not co-isometric", co});
    const double iso = operator_norm(big.adjoint() * big - eye);
    if (iso > 1e-10) out.push_back({"S not isometric", iso});
  }
  return out;
}

void require_valid(const SystemModel& model) {
  const auto report = validate_model(model);
  if (report.empty()) return;
  std::ostringstream os;
  os << "invalid model:";
  for (const auto& v : report) os << " [" << v.what << ", norm " << v.norm << "]";
  throw Error(ErrorKind::validation, os.str());
}

ComplexMatrix effective_drift(const SystemModel& model) {
  ComplexMatrix k = -kI * model.hamiltonian;
  for (const auto& r : model.channels) k -= 0.5 * r.adjoint() * r;
  return k;
}

Superoperator build_liouvillian(const SystemModel& model, double t) {
  const auto dim = model.dim;
  const std::size_t d = model.channel_count();
  const ComplexVector f = model.drive.values(t);

  // A = K - sum_kl R_k^* S_kl f_l ;  M_k = R_k + sum_l S_kl f_l
  ComplexMatrix a = effective_drift(model);
  std::vector<ComplexMatrix> jumps;
  jumps.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    ComplexMatrix shift = ComplexMatrix::Zero(dim, dim);
    for (std::size_t l = 0; l < d; ++l) {
      const Complex fl = f(Eigen::Index(l));
      if (fl != Complex{}) shift += model.scattering_block(k, l) * fl;
    }
    a -= model.channels[k].adjoint() * shift;
    jumps.push_back(model.channels[k] + shift);
  }

  Superoperator out = Superoperator::left(a) + Superoperator::right(a.adjoint());
  for (const auto& m : jumps) out += Superoperator::sandwich(m, m.adjoint());
  const double f2 = f.squaredNorm();
  if (f2 != 0.0) out = out - Superoperator(f2 * Superoperator::identity(dim).matrix());
  return out;
}

ComplexMatrix dressed_hamiltonian(const SystemModel& model, double t) {
  ComplexMatrix h = model.hamiltonian;
  for (std::size_t k = 0; k < model.channel_count(); ++k) {
    const Complex fk = model.drive.value(k, t);
    if (fk == Complex{}) continue;
    const ComplexMatrix& r = model.channels[k];
    h += -kI * fk * r.adjoint() + kI * std::conj(fk) * r;
  }
  return h;
}

Superoperator lindblad_liouvillian(const SystemModel& model, double t) {
  if (!model.identity_scattering()) {
    for (std::size_t k = 0; k < model.channel_count(); ++k) {
      for (std::size_t l = 0; l < model.channel_count(); ++l) {
        ComplexMatrix expected = ComplexMatrix::Zero(model.dim, model.dim);
        if (k == l) expected.setIdentity();
        if ((model.scattering_block(k, l) - expected).norm() > 1e-14) {
          throw Error(ErrorKind::invalid_argument,
                      "Lindblad form requires identity scattering");
        }
      }
    }
  }
  const ComplexMatrix h = dressed_hamiltonian(model, t);
  const ComplexMatrix eye = ComplexMatrix::Identity(model.dim, model.dim);
  ComplexMatrix generator = -kI * (kron(eye, h) - kron(h.transpose(), eye));
  for (const auto& r : model.channels) {
    const ComplexMatrix rr = r.adjoint() * r;
    generator += kron(r.conjugate(), r) - 0.5 * kron(eye, rr) - 0.5 * kron(rr.transpose(), eye);
  }
  return Superoperator(std::move(generator));
}

ComplexMatrix output_channel_operator(const SystemModel& model, double t) {
  if (model.channel_count() == 0) return ComplexMatrix::Zero(model.dim, model.dim);
  const std::size_t k0 = model.output_channel;
  ComplexMatrix out = model.channels.at(k0);
  for (std::size_t l = 0; l < model.channel_count(); ++l) {
    const Complex fl = model.drive.value(l, t);
    if (fl != Complex{}) out += model.scattering_block(k0, l) * fl;
  }
  return out;
}

bool liouvillian_constant_on(const SystemModel& model, double horizon) {
  return model.drive.constant_on(horizon);
}

// ---------------------------------------------------------------------------

ComplexMatrix pauli(Pauli which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case Pauli::plus:  // |e><g|
      m(0, 1) = 1.0;
      break;
    case Pauli::minus:  // |g><e|
      m(1, 0) = 1.0;
      break;
    case Pauli::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::y:  // i(sigma_- - sigma_+)
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Pauli::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

ComplexMatrix sigma_theta(double theta) {
  const Complex phase = std::exp(Complex(0.0, theta));
  return phase * pauli(Pauli::minus) + std::conj(phase) * pauli(Pauli::plus);
}

namespace {

// Charge q with exp(i w t s_z/2) R exp(-i w t s_z/2) = exp(i q w t) R.
std::optional<int> frame_charge(const ComplexMatrix& r) {
  const double scale = std::max(1.0, r.norm()) * 1e-12;
  const bool lower = std::abs(r(1, 0)) > scale;
  const bool upper = std::abs(r(0, 1)) > scale;
  if (lower && upper) return std::nullopt;
  if (lower) return -1;
  if (upper) return 1;
  return 0;
}

}  // namespace

SystemModel rotating_frame(const SystemModel& model, double omega) {
  const Error unsupported(ErrorKind::invalid_argument,
                          "rotating frame not defined for this model");
  if (model.dim != 2 || !model.identity_scattering()) throw unsupported;
  const ComplexMatrix& h = model.hamiltonian;
  if (std::abs(h(0, 1)) > 1e-12 * std::max(1.0, h.norm()) ||
      std::abs(h(1, 0)) > 1e-12 * std::max(1.0, h.norm())) {
    throw unsupported;
  }

  SystemModel out = model;
  out.hamiltonian = h - 0.5 * omega * pauli(Pauli::z);

  std::vector<int> charges;
  for (const auto& r : model.channels) {
    const auto q = frame_charge(r);
    if (!q) throw unsupported;
    charges.push_back(*q);
  }

  if (!model.drive.is_zero()) {
    std::vector<Complex> amps;
    std::vector<double> freqs;
    for (std::size_t k = 0; k < model.channel_count(); ++k) {
      amps.push_back(model.drive.amplitude(k));
      // f_k R_k^* picks up exp(-i (w_k + q_k omega) t) in the frame.
      const bool inert = model.channels[k].norm() == 0.0;
      if (inert && k == model.output_channel && amps.back() != Complex{}) throw unsupported;
      freqs.push_back(inert ? 0.0 : model.drive.frequency(k) + charges[k] * omega);
    }
    out.drive = DriveFunction::monochromatic(std::move(amps), std::move(freqs),
                                             model.drive.cutoff());
  }

  RotatingFrame frame = model.frame.value_or(RotatingFrame{});
  frame.omega += omega;
  frame.output_charge = model.channel_count() ? charges[model.output_channel] : 0;
  out.frame = frame;
  return out;
}

}  // namespace homodyne
