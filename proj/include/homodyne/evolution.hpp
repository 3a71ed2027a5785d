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
#include "homodyne/model.hpp"

#include <vector>

namespace homodyne {

/// Classical fourth-order Runge-Kutta on the vectorized master equation.
struct EvolutionConfig {
  double step = 1e-3;
  bool renormalize = true;  // re-impose unit trace after every step
};

void validate(const EvolutionConfig& cfg);

/// Number of uniform steps of size <= cfg.step covering [t0, t1].
std::size_t step_count(double t0, double t1, double max_step);

/// eta_{t1} from eta_{t0} = rho0. Throws Error(numerical)
/// "integration unstable, reduce step" when positivity is lost beyond 1e-6.
DensityMatrix evolve_state(const SystemModel& model, const DensityMatrix& rho0, double t0,
                           double t1, const EvolutionConfig& cfg);

/// States on the uniform grid t_n = t0 + n (t1 - t0) / steps, n = 0..steps.
/// Grid intervals longer than cfg.step are subdivided.
std::vector<ComplexMatrix> evolve_on_grid(const SystemModel& model, const DensityMatrix& rho0,
                                          double t0, double t1, std::size_t steps,
                                          const EvolutionConfig& cfg);

/// Upsilon(t, s): dU/dt = L(t) U, U(s, s) = 1.
Superoperator propagator(const SystemModel& model, double s, double t,
                         const EvolutionConfig& cfg);

/// exp(tau * generator) by scaling and squaring.
Superoperator exponential(const Superoperator& generator, double tau);

/// Upsilon(t_i, t_0) on an ordered grid, built by one forward sweep.
class PropagatorTable {
 public:
  PropagatorTable(const SystemModel& model, std::vector<double> grid,
                  const EvolutionConfig& cfg);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const Superoperator& from_start(std::size_t i) const { return maps_.at(i); }

  /// Upsilon(t_j, t_i) for i <= j, integrated forward from t_i rather than
  /// formed by inverting from_start(i).
  Superoperator between(std::size_t i, std::size_t j) const;

 private:
  SystemModel model_;
  EvolutionConfig cfg_;
  std::vector<double> grid_;
  std::vector<Superoperator> maps_;
};

/// Null vector of a time-independent Liouvillian, Hermitized and normalized.
/// Throws Error(numerical) "non-unique steady state" when the second-smallest
/// singular value is below 1e-8 ||L||.
DensityMatrix steady_state(const SystemModel& model);

}  // namespace homodyne
