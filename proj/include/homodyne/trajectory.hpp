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

// Monte Carlo unraveling of homodyne detection: diffusive stochastic master
// equation, measurement records, periodograms and ensemble spectra.

#include "homodyne/linalg.hpp"
#include "homodyne/model.hpp"
#include "homodyne/spectrum.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace homodyne {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 100.0;
  std::size_t n_traj = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: HOMODYNE_THREADS or hardware concurrency
};

/// dt > 0, horizon >= 100 dt, n_traj >= 1.
void validate(const SimConfig& cfg);

/// Worker count from HOMODYNE_THREADS, else hardware concurrency.
unsigned default_worker_count();

struct Trajectory {
  double dt = 0.0;
  std::vector<double> increments;  // dX_j over [t_j, t_j + dt]
  std::vector<double> currents;    // Tr{(Z + Z^*) rho_{t_j}}
  DensityMatrix final_state;

  double horizon() const noexcept { return dt * double(increments.size()); }
  std::vector<double> times() const;  // t_j = j dt, j = 0..N
};

struct SmeStep {
  DensityMatrix rho;
  double dx;
};

/// Euler-Maruyama step of
///   d rho = L[rho] dt + (Z rho + rho Z^* - Tr{(Z + Z^*) rho} rho) dW,
///   dX = Tr{(Z + Z^*) rho} dt + dW,
/// followed by Hermitization, trace renormalization and clipping of negative
/// eigenvalues above -1e-4. Throws Error(numerical) "positivity lost, reduce
/// dt" below that.
SmeStep sme_step(const SystemModel& model, const QuadratureParams& params,
                 const DensityMatrix& rho, double t, double dt, double dw);

/// Deterministic in (cfg.seed, index); streams for different indices are
/// independent.
Trajectory simulate_trajectory(const SystemModel& model, const QuadratureParams& params,
                               const DensityMatrix& rho0, const SimConfig& cfg,
                               std::uint64_t index);

/// (1/T) |sum_j exp(i mu t_j) dX_j|^2
std::vector<double> periodogram(const Trajectory& traj, std::span<const double> mu);

using TrajectoryHook = std::function<void(std::size_t index, const Trajectory& traj)>;

/// Ensemble spectrum from cfg.n_traj >= 2 trajectories. With F_n(mu) the
/// Fourier sum of trajectory n and Fbar its ensemble mean:
///   elastic   = |Fbar|^2 / T
///   inelastic = n/(n-1) * mean_n |F_n - Fbar|^2 / T
/// Standard errors come from the spread of the per-trajectory periodograms
/// (centered ones for the inelastic part). The first `dump_count`
/// trajectories are passed to `hook` in index order.
SpectrumCurve monte_carlo_spectrum(const SystemModel& model, const QuadratureParams& params,
                                   const DensityMatrix& rho0, const SimConfig& cfg,
                                   std::span<const double> mu, const TrajectoryHook& hook = {},
                                   std::size_t dump_count = 0);

struct EnsembleState {
  std::vector<double> times;
  std::vector<ComplexMatrix> mean;
  std::vector<Eigen::MatrixXd> stderr_real;
  std::vector<Eigen::MatrixXd> stderr_imag;
};

/// Ensemble mean of rho_t at the given checkpoints (rounded to the dt grid).
EnsembleState ensemble_mean_state(const SystemModel& model, const QuadratureParams& params,
                                  const DensityMatrix& rho0, const SimConfig& cfg,
                                  std::span<const double> checkpoints);

}  // namespace homodyne
