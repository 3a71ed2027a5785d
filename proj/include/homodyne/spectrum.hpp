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

// Finite-horizon spectrum of the homodyne output current, split into the
// elastic (squared mean) and inelastic (variance) parts, computed from the
// reduced system dynamics.

#include "homodyne/evolution.hpp"
#include "homodyne/linalg.hpp"
#include "homodyne/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace homodyne {

/// Local-oscillator phase and frequency. `nu` unset means "locked to the
/// laser": only valid for rotating-frame models, where nu = frame omega.
struct QuadratureParams {
  double theta = 0.0;
  std::optional<double> nu;
};

void validate(const QuadratureParams& params);

/// Angular rate r with Z(t) = exp(i (r t + theta)) (R_1 + sum_k S_1k f_k(t))
/// expressed in the model's frame.
double output_phase_rate(const SystemModel& model, const QuadratureParams& params);

/// Z(t) for the model's output channel.
ComplexMatrix output_operator(const SystemModel& model, const QuadratureParams& params, double t);

/// E[I(t)] = Tr{(Z(t) + Z(t)^*) eta_t}
double mean_current(const SystemModel& model, const QuadratureParams& params,
                    const DensityMatrix& eta, double t);

enum class Centering { raw, centered };

/// Regular part of E[I(t) I(s)] for s <= t (the delta(t-s) shot-noise term is
/// excluded). With Centering::centered, Z is replaced by
/// Z - Tr{Z eta} at both times.
double autocorrelation_kernel(const SystemModel& model, const QuadratureParams& params, double s,
                              double t, const DensityMatrix& eta_s, const EvolutionConfig& cfg,
                              Centering centering = Centering::centered);

enum class Provenance { analytic, finite_t, monte_carlo };
std::string to_string(Provenance p);

struct SpectrumCurve {
  std::vector<double> mu;
  std::vector<double> total;
  std::vector<double> elastic;
  std::vector<double> inelastic;
  /// Monte Carlo only: per-point standard errors.
  std::vector<double> stderr_total;
  std::vector<double> stderr_inelastic;
  double horizon = 0.0;
  QuadratureParams params;
  Provenance provenance = Provenance::finite_t;
  /// Analytic only: w in S^el = 2 pi w delta(mu).
  double elastic_delta_weight = 0.0;
};

inline constexpr double kCurveTolerance = 1e-9;

/// total = elastic + inelastic; rejects components below -1e-9 and, on
/// symmetric grids, |S(mu) - S(-mu)| > 1e-9. Throws Error(validation) naming
/// the offending mu.
SpectrumCurve assemble_curve(std::vector<double> mu, std::vector<double> elastic,
                             std::vector<double> inelastic, double horizon,
                             const QuadratureParams& params, Provenance provenance);

/// Re-runs the checks of assemble_curve on an existing curve.
void check_curve(const SpectrumCurve& curve);

bool is_symmetric_grid(std::span<const double> mu);

/// Uniform quadrature step: at most cfg.step, 0.01 / (total channel rate),
/// 0.1 / max|mu| and 2 pi / (50 * fastest oscillation).
double quadrature_step(const SystemModel& model, const QuadratureParams& params,
                       std::span<const double> mu, const EvolutionConfig& cfg);

/// (1/T) |int_0^T exp(i mu t) Tr{(Z+Z^*) eta_t} dt|^2, trapezoidal rule.
std::vector<double> spectrum_elastic_finite(const SystemModel& model,
                                            const QuadratureParams& params,
                                            const DensityMatrix& rho0, double horizon,
                                            std::span<const double> mu,
                                            const EvolutionConfig& cfg);

/// 1 + (2/T) int_0^T dt int_0^t ds cos mu(t-s) k(t, s) with the centered kernel.
std::vector<double> spectrum_inelastic_finite(const SystemModel& model,
                                              const QuadratureParams& params,
                                              const DensityMatrix& rho0, double horizon,
                                              std::span<const double> mu,
                                              const EvolutionConfig& cfg);

SpectrumCurve spectrum_finite(const SystemModel& model, const QuadratureParams& params,
                              const DensityMatrix& rho0, double horizon,
                              std::span<const double> mu, const EvolutionConfig& cfg);

/// True when L is constant on [0, T], Z carries no time-dependent phase and
/// rho0 is the steady state (within 1e-10): the kernel then depends on t - s.
bool stationary_applicable(const SystemModel& model, const QuadratureParams& params,
                           const DensityMatrix& rho0, double horizon);

/// Stationary finite-T spectrum for every phase at once. With C = M - <M>,
/// the centered kernel is k_theta(tau) = 2 Re(e^{2 i theta} a(tau)) + 2 Re b(tau),
/// a = Tr{C e^{L tau}[C rho]}, b = Tr{C e^{L tau}[rho C^*]}, so only two
/// windowed cosine transforms are needed per mu.
class StationarySpectrum {
 public:
  /// Throws Error(invalid_argument) when the model is not stationary on
  /// [0, horizon] for the given local-oscillator frequency.
  StationarySpectrum(const SystemModel& model, std::optional<double> nu, double horizon,
                     std::vector<double> mu, const EvolutionConfig& cfg);

  const std::vector<double>& mu() const noexcept { return mu_; }
  double horizon() const noexcept { return horizon_; }
  double step() const noexcept { return step_; }
  const DensityMatrix& steady() const noexcept { return steady_; }

  double inelastic(double theta, std::size_t i) const;
  std::vector<double> inelastic(double theta) const;
  std::vector<double> elastic(double theta) const;
  /// Centered kernel on the tau grid (tau_n = n * step()).
  std::vector<double> kernel(double theta) const;

 private:
  std::vector<double> mu_;
  double horizon_;
  double step_;
  DensityMatrix steady_;
  Complex mean_output_;  // Tr{M rho}
  std::vector<Complex> a_;
  std::vector<Complex> b_;
  std::vector<Complex> transform_a_;
  std::vector<Complex> transform_b_;
  std::vector<double> window_sum_sq_;  // |sum_n w_n e^{i mu t_n}|^2
};

}  // namespace homodyne
