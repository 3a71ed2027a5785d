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

#include "homodyne/evolution.hpp"

#include "homodyne/error.hpp"
#include "integrator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace homodyne {

void validate(const EvolutionConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) {
    throw Error(ErrorKind::invalid_argument, "evolution step must be positive");
  }
}

std::size_t step_count(double t0, double t1, double max_step) {
  if (t1 <= t0) return 0;
  const double n = std::ceil((t1 - t0) / max_step - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

namespace {

void check_times(double t0, double t1) {
  if (!(t1 >= t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw Error(ErrorKind::invalid_argument, "evolution requires t1 >= t0");
  }
}

DensityMatrix finish_state(const ComplexVector& v, Eigen::Index dim) {
  try {
    return DensityMatrix::project(unvectorize(v, dim), 1e-6);
  } catch (const Error&) {
    throw Error(ErrorKind::numerical, "integration unstable, reduce step");
  }
}

}  // namespace

std::vector<ComplexMatrix> evolve_on_grid(const SystemModel& model, const DensityMatrix& rho0,
                                          double t0, double t1, std::size_t steps,
                                          const EvolutionConfig& cfg) {
  check_times(t0, t1);
  if (rho0.dim() != model.dim) throw Error(ErrorKind::invalid_argument, "state dimension mismatch");
  detail::LiouvillianField field(model, t1);
  std::vector<ComplexMatrix> out;
  out.reserve(steps + 1);
  ComplexVector y = vectorize(rho0.matrix());
  out.push_back(rho0.matrix());
  const double h = steps ? (t1 - t0) / double(steps) : 0.0;
  const std::size_t sub = std::max<std::size_t>(1, step_count(0.0, h, cfg.step));
  const double hs = h / double(sub);
  const auto rhs = [&](double t, const ComplexVector& v) -> ComplexVector {
    return field.at(t) * v;
  };
  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t k = 0; k < sub; ++k) {
      detail::rk4_step(y, t0 + double(n) * h + double(k) * hs, hs, rhs);
      if (cfg.renormalize) {
        Complex tr{};
        for (Eigen::Index i = 0; i < model.dim; ++i) tr += y(i * model.dim + i);
        y /= tr.real();
      }
    }
    out.push_back(unvectorize(y, model.dim));
  }
  return out;
}

DensityMatrix evolve_state(const SystemModel& model, const DensityMatrix& rho0, double t0,
                           double t1, const EvolutionConfig& cfg) {
  validate(cfg);
  check_times(t0, t1);
  if (t1 == t0) return rho0;
  const auto states = evolve_on_grid(model, rho0, t0, t1, step_count(t0, t1, cfg.step), cfg);
  return finish_state(vectorize(states.back()), model.dim);
}

Superoperator propagator(const SystemModel& model, double s, double t,
                         const EvolutionConfig& cfg) {
  validate(cfg);
  check_times(s, t);
  const Eigen::Index n = model.dim * model.dim;
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  const std::size_t steps = step_count(s, t, cfg.step);
  if (steps == 0) return Superoperator(std::move(u));
  detail::LiouvillianField field(model, t);
  const double h = (t - s) / double(steps);
  const auto rhs = [&](double time, const ComplexMatrix& m) -> ComplexMatrix {
    return field.at(time) * m;
  };
  for (std::size_t k = 0; k < steps; ++k) detail::rk4_step(u, s + double(k) * h, h, rhs);
  return Superoperator(std::move(u));
}

Superoperator exponential(const Superoperator& generator, double tau) {
  const ComplexMatrix scaled = tau * generator.matrix();
  return Superoperator(scaled.exp());
}

// ---------------------------------------------------------------------------

PropagatorTable::PropagatorTable(const SystemModel& model, std::vector<double> grid,
                                 const EvolutionConfig& cfg)
    : model_(model), cfg_(cfg), grid_(std::move(grid)) {
  validate(cfg_);
  if (grid_.empty()) throw Error(ErrorKind::invalid_argument, "propagator grid is empty");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "propagator grid must be increasing");
    }
  }
  maps_.reserve(grid_.size());
  maps_.push_back(Superoperator::identity(model_.dim));
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    maps_.push_back(propagator(model_, grid_[i - 1], grid_[i], cfg_) * maps_.back());
  }
}

Superoperator PropagatorTable::between(std::size_t i, std::size_t j) const {
  if (i > j || j >= grid_.size()) {
    throw Error(ErrorKind::invalid_argument, "propagator indices out of order");
  }
  return propagator(model_, grid_[i], grid_[j], cfg_);
}

// ---------------------------------------------------------------------------

DensityMatrix steady_state(const SystemModel& model) {
  if (!liouvillian_constant_on(model, DriveFunction::kUnbounded)) {
    throw Error(ErrorKind::invalid_argument,
                "steady state requires a time-independent Liouvillian (use a rotating frame)");
  }
  return detail::null_state(build_liouvillian(model, 0.0).matrix(), model.dim);
}

DensityMatrix detail::null_state(const ComplexMatrix& l, Eigen::Index dim) {
  const Eigen::Index n = l.rows();
  Eigen::JacobiSVD<ComplexMatrix> svd(l, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), 1e-300);
  if (n > 1 && sv(n - 2) < 1e-8 * scale) {
    throw Error(ErrorKind::numerical, "non-unique steady state");
  }
  ComplexMatrix x = unvectorize(svd.matrixV().col(n - 1), dim);
  const Complex tr = x.trace();
  if (std::abs(tr) < 1e-12 * std::max(1.0, x.norm())) {
    throw Error(ErrorKind::numerical, "no trace-one steady state");
  }
  x = hermitize(x / tr);
  x /= x.trace().real();
  try {
    return DensityMatrix::project(x, 1e-10);
  } catch (const Error&) {
    throw Error(ErrorKind::numerical, "steady state is not positive");
  }
}

}  // namespace homodyne
