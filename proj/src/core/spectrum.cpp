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

#include "homodyne/spectrum.hpp"

#include "homodyne/error.hpp"
#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace homodyne {

void validate(const QuadratureParams& params) {
  if (!std::isfinite(params.theta)) {
    throw Error(ErrorKind::invalid_argument, "theta must be finite");
  }
  if (params.nu && !(*params.nu > 0.0 && std::isfinite(*params.nu))) {
    throw Error(ErrorKind::invalid_argument, "local-oscillator frequency nu must be positive");
  }
}

double output_phase_rate(const SystemModel& model, const QuadratureParams& params) {
  validate(params);
  if (model.frame) {
    const double nu = params.nu.value_or(model.frame->omega);
    return nu + model.frame->output_charge * model.frame->omega;
  }
  if (!params.nu) {
    throw Error(ErrorKind::invalid_argument,
                "laboratory-frame model needs an explicit local-oscillator frequency nu");
  }
  return *params.nu;
}

ComplexMatrix output_operator(const SystemModel& model, const QuadratureParams& params, double t) {
  const double rate = output_phase_rate(model, params);
  return std::exp(Complex(0.0, rate * t + params.theta)) * output_channel_operator(model, t);
}

double mean_current(const SystemModel& model, const QuadratureParams& params,
                    const DensityMatrix& eta, double t) {
  const ComplexMatrix z = output_operator(model, params, t);
  return 2.0 * (z * eta.matrix()).trace().real();
}

double autocorrelation_kernel(const SystemModel& model, const QuadratureParams& params, double s,
                              double t, const DensityMatrix& eta_s, const EvolutionConfig& cfg,
                              Centering centering) {
  validate(cfg);
  if (!(t >= s)) throw Error(ErrorKind::invalid_argument, "kernel requires s <= t");
  const auto dim = model.dim;
  const auto centered = [&](double time, const ComplexMatrix& rho) {
    ComplexMatrix z = output_operator(model, params, time);
    if (centering == Centering::centered) {
      z -= (z * rho).trace() * ComplexMatrix::Identity(dim, dim);
    }
    return z;
  };
  const ComplexMatrix z_s = centered(s, eta_s.matrix());
  const ComplexMatrix source = z_s * eta_s.matrix() + eta_s.matrix() * z_s.adjoint();

  // Propagate (eta, source) together: the source needs Upsilon(t,s), the
  // centering at t needs eta_t.
  const Eigen::Index d2 = dim * dim;
  ComplexVector y(2 * d2);
  y.head(d2) = vectorize(eta_s.matrix());
  y.tail(d2) = vectorize(source);
  const std::size_t steps = step_count(s, t, cfg.step);
  if (steps > 0) {
    detail::LiouvillianField field(model, t);
    const double h = (t - s) / double(steps);
    const auto rhs = [&](double time, const ComplexVector& v) -> ComplexVector {
      const ComplexMatrix& l = field.at(time);
      ComplexVector out(v.size());
      out.head(d2) = l * v.head(d2);
      out.tail(d2) = l * v.tail(d2);
      return out;
    };
    for (std::size_t k = 0; k < steps; ++k) detail::rk4_step(y, s + double(k) * h, h, rhs);
  }
  const ComplexMatrix eta_t = unvectorize(y.head(d2), dim);
  const ComplexMatrix moved = unvectorize(y.tail(d2), dim);
  const ComplexMatrix z_t = centered(t, eta_t);
  return ((z_t + z_t.adjoint()) * moved).trace().real();
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic:
      return "analytic";
    case Provenance::finite_t:
      return "finite_t";
    case Provenance::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

bool is_symmetric_grid(std::span<const double> mu) {
  if (mu.empty()) return false;
  double scale = 0.0;
  for (double m : mu) scale = std::max(scale, std::abs(m));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (std::abs(mu[i] + mu[mu.size() - 1 - i]) > tol) return false;
  }
  return true;
}

void check_curve(const SpectrumCurve& c) {
  const std::size_t n = c.mu.size();
  if (c.total.size() != n || c.elastic.size() != n || c.inelastic.size() != n) {
    throw Error(ErrorKind::invalid_argument, "spectrum arrays are not aligned with the mu grid");
  }
  const auto fail = [](const std::string& what, double mu, double value) {
    std::ostringstream os;
    os.precision(12);
    os << what << " at mu = " << mu << " (value " << value << ")";
    throw Error(ErrorKind::validation, os.str());
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(c.total[i]) || !std::isfinite(c.elastic[i]) ||
        !std::isfinite(c.inelastic[i])) {
      fail("non-finite spectrum", c.mu[i], c.total[i]);
    }
    if (std::abs(c.total[i] - c.elastic[i] - c.inelastic[i]) > kCurveTolerance) {
      fail("total differs from elastic + inelastic", c.mu[i], c.total[i]);
    }
    if (c.elastic[i] < -kCurveTolerance) fail("negative elastic spectrum", c.mu[i], c.elastic[i]);
    if (c.inelastic[i] < -kCurveTolerance) {
      fail("negative inelastic spectrum", c.mu[i], c.inelastic[i]);
    }
    if (c.total[i] < -kCurveTolerance) fail("negative total spectrum", c.mu[i], c.total[i]);
  }
  if (is_symmetric_grid(c.mu)) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = n - 1 - i;
      if (std::abs(c.elastic[i] - c.elastic[j]) > kCurveTolerance ||
          std::abs(c.inelastic[i] - c.inelastic[j]) > kCurveTolerance) {
        fail("spectrum not even in mu", c.mu[i], c.inelastic[i] - c.inelastic[j]);
      }
    }
  }
}

SpectrumCurve assemble_curve(std::vector<double> mu, std::vector<double> elastic,
                             std::vector<double> inelastic, double horizon,
                             const QuadratureParams& params, Provenance provenance) {
  SpectrumCurve c;
  c.total.resize(mu.size());
  if (elastic.size() == mu.size() && inelastic.size() == mu.size()) {
    for (std::size_t i = 0; i < mu.size(); ++i) c.total[i] = elastic[i] + inelastic[i];
  }
  c.mu = std::move(mu);
  c.elastic = std::move(elastic);
  c.inelastic = std::move(inelastic);
  c.horizon = horizon;
  c.params = params;
  c.provenance = provenance;
  check_curve(c);
  return c;
}

// ---------------------------------------------------------------------------

namespace {

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::invalid_argument, "horizon T must be positive");
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Trapezoid weights on n+1 uniform nodes.
inline double trapezoid_weight(std::size_t n, std::size_t last, double h) {
  return (n == 0 || n == last) ? 0.5 * h : h;
}

/// Calls visit(i, n, phase) with phase = exp(i mu_i n h) for every node,
/// using a rotation recurrence resynchronized every 256 nodes.
template <class Visit>
void for_each_phase(std::span<const double> mu, std::size_t nodes, double h, Visit&& visit) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Complex rot = std::exp(Complex(0.0, mu[i] * h));
    Complex phase = 1.0;
    for (std::size_t n = 0; n < nodes; ++n) {
      if ((n & 255u) == 0) phase = std::exp(Complex(0.0, mu[i] * h * double(n)));
      visit(i, n, phase);
      phase *= rot;
    }
  }
}

std::vector<double> generic_inelastic(const SystemModel& model, const QuadratureParams& params,
                                      const DensityMatrix& rho0, double horizon,
                                      std::span<const double> mu, const EvolutionConfig& cfg) {
  // For each mu, W_mu(t) = int_0^t e^{i mu (t-s)} Upsilon(t,s)[Zc(s) eta_s + eta_s Zc(s)^*] ds
  // solves W' = (L + i mu) W + source(t); the double integral is
  // int_0^T Re Tr{(Zc + Zc^*)(t) W_mu(t)} dt, carried as an extra component.
  const double h0 = quadrature_step(model, params, mu, cfg);
  const std::size_t steps = step_count(0.0, horizon, h0);
  const double h = horizon / double(steps);
  const Eigen::Index dim = model.dim;
  const Eigen::Index d2 = dim * dim;
  const auto m = static_cast<Eigen::Index>(mu.size());

  Eigen::VectorXcd imu(m);
  for (Eigen::Index i = 0; i < m; ++i) imu(i) = Complex(0.0, mu[std::size_t(i)]);

  detail::LiouvillianField field(model, horizon);
  ComplexVector y = ComplexVector::Zero(d2 + d2 * m + m);
  y.head(d2) = vectorize(rho0.matrix());
  const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);

  const auto rhs = [&](double t, const ComplexVector& v) -> ComplexVector {
    const ComplexMatrix& l = field.at(t);
    const ComplexMatrix rho = unvectorize(v.head(d2), dim);
    ComplexMatrix zc = output_operator(model, params, t);
    zc -= (zc * rho).trace() * eye;
    const ComplexVector source = vectorize(zc * rho + rho * zc.adjoint());
    const ComplexMatrix probe = (zc + zc.adjoint()).transpose();
    const Eigen::Map<const ComplexVector> q(probe.data(), d2);

    const Eigen::Map<const ComplexMatrix> w(v.data() + d2, d2, m);
    ComplexVector out(v.size());
    out.head(d2) = l * v.head(d2);
    Eigen::Map<ComplexMatrix> dw(out.data() + d2, d2, m);
    dw.noalias() = l * w;
    dw += w * imu.asDiagonal();
    dw.colwise() += source;
    out.tail(m) = (q.transpose() * w).transpose().real().cast<Complex>();
    return out;
  };
  for (std::size_t k = 0; k < steps; ++k) detail::rk4_step(y, double(k) * h, h, rhs);

  std::vector<double> out(mu.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    out[std::size_t(i)] = 1.0 + 2.0 / horizon * y(d2 + d2 * m + i).real();
  }
  return out;
}

}  // namespace

double quadrature_step(const SystemModel& model, const QuadratureParams& params,
                       std::span<const double> mu, const EvolutionConfig& cfg) {
  validate(cfg);
  double h = cfg.step;
  double rate = 0.0;
  for (const auto& r : model.channels) rate += std::pow(operator_norm(r), 2);
  if (rate > 0.0) h = std::min(h, 1e-2 / rate);
  const double mu_max = max_abs(mu);
  if (mu_max > 0.0) h = std::min(h, 0.1 / mu_max);
  double fastest = std::abs(output_phase_rate(model, params));
  for (std::size_t k = 0; k < model.drive.channels(); ++k) {
    fastest = std::max(fastest, std::abs(model.drive.frequency(k)));
  }
  fastest = std::max(fastest, 2.0 * operator_norm(model.hamiltonian));
  if (fastest > 0.0) h = std::min(h, 2.0 * std::numbers::pi / (50.0 * fastest));
  return h;
}

bool stationary_applicable(const SystemModel& model, const QuadratureParams& params,
                           const DensityMatrix& rho0, double horizon) {
  if (!liouvillian_constant_on(model, horizon)) return false;
  if (output_phase_rate(model, params) != 0.0) return false;
  try {
    const DensityMatrix eq = detail::null_state(build_liouvillian(model, 0.0).matrix(), model.dim);
    return (eq.matrix() - rho0.matrix()).norm() <= 1e-10;
  } catch (const Error&) {
    return false;
  }
}

std::vector<double> spectrum_elastic_finite(const SystemModel& model,
                                            const QuadratureParams& params,
                                            const DensityMatrix& rho0, double horizon,
                                            std::span<const double> mu,
                                            const EvolutionConfig& cfg) {
  check_horizon(horizon);
  if (rho0.dim() != model.dim) throw Error(ErrorKind::invalid_argument, "state dimension mismatch");
  const double h0 = quadrature_step(model, params, mu, cfg);
  const std::size_t steps = step_count(0.0, horizon, h0);
  const double h = horizon / double(steps);
  const auto states = evolve_on_grid(model, rho0, 0.0, horizon, steps, cfg);

  std::vector<double> current(states.size());
  for (std::size_t n = 0; n < states.size(); ++n) {
    const double t = double(n) * h;
    const ComplexMatrix z = output_operator(model, params, t);
    current[n] = 2.0 * (z * states[n]).trace().real();
  }
  std::vector<Complex> sums(mu.size());
  for_each_phase(mu, states.size(), h, [&](std::size_t i, std::size_t n, Complex phase) {
    sums[i] += trapezoid_weight(n, steps, h) * current[n] * phase;
  });
  std::vector<double> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = std::norm(sums[i]) / horizon;
  return out;
}

std::vector<double> spectrum_inelastic_finite(const SystemModel& model,
                                              const QuadratureParams& params,
                                              const DensityMatrix& rho0, double horizon,
                                              std::span<const double> mu,
                                              const EvolutionConfig& cfg) {
  check_horizon(horizon);
  validate(cfg);
  if (rho0.dim() != model.dim) throw Error(ErrorKind::invalid_argument, "state dimension mismatch");
  if (stationary_applicable(model, params, rho0, horizon)) {
    const StationarySpectrum s(model, params.nu, horizon, {mu.begin(), mu.end()}, cfg);
    return s.inelastic(params.theta);
  }
  return generic_inelastic(model, params, rho0, horizon, mu, cfg);
}

SpectrumCurve spectrum_finite(const SystemModel& model, const QuadratureParams& params,
                              const DensityMatrix& rho0, double horizon,
                              std::span<const double> mu, const EvolutionConfig& cfg) {
  check_horizon(horizon);
  validate(cfg);
  std::vector<double> grid(mu.begin(), mu.end());
  if (stationary_applicable(model, params, rho0, horizon)) {
    const StationarySpectrum s(model, params.nu, horizon, grid, cfg);
    return assemble_curve(std::move(grid), s.elastic(params.theta), s.inelastic(params.theta),
                          horizon, params, Provenance::finite_t);
  }
  auto elastic = spectrum_elastic_finite(model, params, rho0, horizon, mu, cfg);
  auto inelastic = generic_inelastic(model, params, rho0, horizon, mu, cfg);
  return assemble_curve(std::move(grid), std::move(elastic), std::move(inelastic), horizon, params,
                        Provenance::finite_t);
}

// ---------------------------------------------------------------------------

namespace {

DensityMatrix stationary_state(const SystemModel& model, std::optional<double> nu, double horizon) {
  const QuadratureParams params{0.0, nu};
  if (!liouvillian_constant_on(model, horizon) || output_phase_rate(model, params) != 0.0) {
    throw Error(ErrorKind::invalid_argument,
                "stationary spectrum needs a time-independent Liouvillian and output phase");
  }
  return detail::null_state(build_liouvillian(model, 0.0).matrix(), model.dim);
}

}  // namespace

StationarySpectrum::StationarySpectrum(const SystemModel& model, std::optional<double> nu,
                                       double horizon, std::vector<double> mu,
                                       const EvolutionConfig& cfg)
    : mu_(std::move(mu)),
      horizon_(horizon),
      step_(0.0),
      steady_(stationary_state(model, nu, horizon)) {
  check_horizon(horizon);
  const QuadratureParams params{0.0, nu};
  const std::size_t steps = step_count(0.0, horizon, quadrature_step(model, params, mu_, cfg));
  step_ = horizon / double(steps);

  const Eigen::Index dim = model.dim;
  const ComplexMatrix& rho = steady_.matrix();
  const ComplexMatrix m = output_channel_operator(model, 0.0);
  mean_output_ = (m * rho).trace();
  const ComplexMatrix c = m - mean_output_ * ComplexMatrix::Identity(dim, dim);

  // a_n = Tr{C Y_n}, b_n = Tr{C Y_n^*} with Y_n = exp(L n h)[C rho].
  const ComplexMatrix ct = c.transpose();
  const Eigen::Map<const ComplexVector> probe_a(ct.data(), ct.size());
  const Eigen::Map<const ComplexVector> probe_b(c.data(), c.size());
  const ComplexMatrix step_map = exponential(build_liouvillian(model, 0.0), step_).matrix();
  ComplexVector y = vectorize(c * rho);
  ComplexVector next(y.size());
  a_.resize(steps + 1);
  b_.resize(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) {
    a_[n] = (probe_a.transpose() * y).value();
    b_[n] = std::conj((probe_b.adjoint() * y).value());
    next.noalias() = step_map * y;
    y.swap(next);
  }

  transform_a_.assign(mu_.size(), Complex{});
  transform_b_.assign(mu_.size(), Complex{});
  window_sum_sq_.assign(mu_.size(), 0.0);
  std::vector<Complex> window(mu_.size());
  for_each_phase(mu_, steps + 1, step_, [&](std::size_t i, std::size_t n, Complex phase) {
    const double w = trapezoid_weight(n, steps, step_);
    const double fejer = 1.0 - double(n) / double(steps);
    const double cosine = 2.0 * w * fejer * phase.real();
    transform_a_[i] += cosine * a_[n];
    transform_b_[i] += cosine * b_[n];
    window[i] += w * phase;
  });
  for (std::size_t i = 0; i < mu_.size(); ++i) window_sum_sq_[i] = std::norm(window[i]);
}

double StationarySpectrum::inelastic(double theta, std::size_t i) const {
  const Complex rot = std::exp(Complex(0.0, 2.0 * theta));
  return 1.0 + 2.0 * (rot * transform_a_.at(i)).real() + 2.0 * transform_b_.at(i).real();
}

std::vector<double> StationarySpectrum::inelastic(double theta) const {
  std::vector<double> out(mu_.size());
  for (std::size_t i = 0; i < mu_.size(); ++i) out[i] = inelastic(theta, i);
  return out;
}

std::vector<double> StationarySpectrum::elastic(double theta) const {
  const double mean = 2.0 * (std::exp(Complex(0.0, theta)) * mean_output_).real();
  std::vector<double> out(mu_.size());
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    out[i] = mean * mean * window_sum_sq_[i] / horizon_;
  }
  return out;
}

std::vector<double> StationarySpectrum::kernel(double theta) const {
  const Complex rot = std::exp(Complex(0.0, 2.0 * theta));
  std::vector<double> out(a_.size());
  for (std::size_t n = 0; n < a_.size(); ++n) {
    out[n] = 2.0 * (rot * a_[n]).real() + 2.0 * b_[n].real();
  }
  return out;
}

}  // namespace homodyne
