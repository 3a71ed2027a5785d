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

#include "homodyne/trajectory.hpp"

#include "homodyne/error.hpp"
#include "integrator.hpp"
#include "parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

namespace homodyne {

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw Error(ErrorKind::invalid_argument, "dt must be positive");
  }
  if (!(cfg.horizon >= 100.0 * cfg.dt) || !std::isfinite(cfg.horizon)) {
    throw Error(ErrorKind::invalid_argument, "horizon must be at least 100 dt");
  }
  if (cfg.n_traj < 1) throw Error(ErrorKind::invalid_argument, "need at least one trajectory");
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("HOMODYNE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return unsigned(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(increments.size() + 1);
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = dt * double(j);
  return t;
}

namespace {

constexpr double kClipFloor = 1e-4;

/// Euler-Maruyama stepper with preallocated buffers. D is the Hilbert-space
/// dimension at compile time (Eigen::Dynamic for the general case).
template <int D>
class Stepper {
  static constexpr int D2 = D == Eigen::Dynamic ? Eigen::Dynamic : D * D;
  using Mat = Eigen::Matrix<Complex, D, D>;
  using Vec = Eigen::Matrix<Complex, D2, 1>;
  using Super = Eigen::Matrix<Complex, D2, D2>;

 public:
  Stepper(const SystemModel& model, const QuadratureParams& params, double horizon)
      : model_(model),
        params_(params),
        field_(model, horizon),
        dim_(model.dim),
        rate_(output_phase_rate(model, params)),
        drive_constant_(model.drive.constant_on(horizon)) {
    const Eigen::Index d2 = dim_ * dim_;
    l_.resize(d2, d2);
    drift_.resize(d2);
    z_.resize(dim_, dim_);
    fixed_z_.resize(dim_, dim_);
    zr_.resize(dim_, dim_);
    next_.resize(dim_, dim_);
    if (field_.constant()) l_ = field_.at(0.0);
    if (drive_constant_) {
      channel_op_ = output_channel_operator(model, 0.0);
      fixed_z_ = std::exp(Complex(0.0, params.theta)) * channel_op_;
    }
  }

  /// Advances rho in place; returns dX.
  double step(Mat& rho, double t, double dt, double dw) {
    if (!field_.constant()) l_ = field_.at(t);
    if (drive_constant_ && rate_ == 0.0) {
      z_ = fixed_z_;
    } else {
      const Complex phase = std::exp(Complex(0.0, rate_ * t + params_.theta));
      z_ = phase * (drive_constant_ ? channel_op_ : output_channel_operator(model_, t));
    }
    zr_.noalias() = z_ * rho;
    const double mean = 2.0 * zr_.trace().real();
    drift_.noalias() = l_ * Eigen::Map<const Vec>(rho.data(), dim_ * dim_);
    next_ = rho + dt * Eigen::Map<const Mat>(drift_.data(), dim_, dim_) +
            dw * (zr_ + zr_.adjoint() - mean * rho);
    rho = 0.5 * (next_ + next_.adjoint());
    rho /= rho.trace().real();
    restore_positivity(rho);
    return mean * dt + dw;
  }

  double current(const Mat& rho, double t) {
    const Complex phase = std::exp(Complex(0.0, rate_ * t + params_.theta));
    const ComplexMatrix m = drive_constant_ ? channel_op_ : output_channel_operator(model_, t);
    return 2.0 * (phase * (m * rho).trace()).real();
  }

 private:
  static double lowest_eigenvalue(const Mat& rho) {
    if constexpr (D == 2) {
      const double a = rho(0, 0).real();
      const double d = rho(1, 1).real();
      return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + std::norm(rho(1, 0)));
    } else {
      return min_eigenvalue_hermitian(rho);
    }
  }

  void restore_positivity(Mat& rho) {
    const double lowest = lowest_eigenvalue(rho);
    if (lowest >= 0.0) return;
    if (lowest < -kClipFloor) {
      throw Error(ErrorKind::numerical,
                  "positivity lost (eigenvalue " + std::to_string(lowest) + "), reduce dt");
    }
    if constexpr (D == 2) {
      // rho - lowest * 1 is the positive part scaled by (l_max - lowest).
      rho.diagonal().array() -= lowest;
      rho /= rho.trace().real();
    } else {
      rho = DensityMatrix::project(rho, kClipFloor).matrix();
    }
  }

  const SystemModel& model_;
  QuadratureParams params_;
  detail::LiouvillianField field_;
  Eigen::Index dim_;
  double rate_;
  bool drive_constant_;
  ComplexMatrix channel_op_;
  Super l_;
  Vec drift_;
  Mat fixed_z_, z_, zr_, next_;
};

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                    std::uint32_t(index >> 32), 0x686f6d6fu};
  return std::mt19937_64(seq);
}

std::size_t horizon_steps(const SimConfig& cfg) {
  return static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
}

void check_inputs(const SystemModel& model, const DensityMatrix& rho0, const SimConfig& cfg) {
  validate(cfg);
  require_valid(model);
  if (rho0.dim() != model.dim) throw Error(ErrorKind::invalid_argument, "state dimension mismatch");
}

/// Runs one trajectory, calling observe(j, t_j, rho_j, dx_j) for every step.
template <int D, class Observe>
DensityMatrix run_path(const SystemModel& model, const QuadratureParams& params,
                       const DensityMatrix& rho0, const SimConfig& cfg, std::uint64_t index,
                       Observe&& observe) {
  const std::size_t steps = horizon_steps(cfg);
  const double dt = cfg.horizon / double(steps);
  Stepper<D> stepper(model, params, cfg.horizon);
  Eigen::Matrix<Complex, D, D> rho = rho0.matrix();
  auto rng = stream_for(cfg.seed, index);
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  for (std::size_t j = 0; j < steps; ++j) {
    const double t = double(j) * dt;
    observe(j, t, rho, stepper);
    const double dx = stepper.step(rho, t, dt, normal(rng));
    observe.increment(j, dx);
  }
  return DensityMatrix::project(rho, kClipFloor);
}

template <class Fn>
decltype(auto) dispatch_dim(Eigen::Index dim, Fn&& fn) {
  if (dim == 2) return fn(std::integral_constant<int, 2>{});
  return fn(std::integral_constant<int, Eigen::Dynamic>{});
}

struct RecordingObserver {
  std::vector<double>& increments;
  std::vector<double>& currents;
  template <class M, class S>
  void operator()(std::size_t, double t, const M& rho, S& stepper) {
    currents.push_back(stepper.current(rho, t));
  }
  void increment(std::size_t, double dx) { increments.push_back(dx); }
};

/// Accumulates F(mu) = sum_j exp(i mu t_j) dX_j.
struct FourierObserver {
  std::span<const double> mu;
  double dt;
  std::vector<Complex>& sums;
  std::vector<Complex> phase;
  std::vector<Complex> rot;
  RecordingObserver* recorder = nullptr;

  FourierObserver(std::span<const double> m, double step, std::vector<Complex>& out)
      : mu(m), dt(step), sums(out), phase(m.size(), 1.0), rot(m.size()) {
    for (std::size_t i = 0; i < mu.size(); ++i) rot[i] = std::exp(Complex(0.0, mu[i] * dt));
  }
  template <class M, class S>
  void operator()(std::size_t j, double t, const M& rho, S& stepper) {
    if ((j & 255u) == 0) {
      for (std::size_t i = 0; i < mu.size(); ++i) phase[i] = std::exp(Complex(0.0, mu[i] * t));
    }
    if (recorder) (*recorder)(j, t, rho, stepper);
  }
  void increment(std::size_t j, double dx) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      sums[i] += phase[i] * dx;
      phase[i] *= rot[i];
    }
    if (recorder) recorder->increment(j, dx);
  }
};

struct SnapshotObserver {
  const std::vector<std::size_t>& marks;
  std::vector<ComplexMatrix>& out;
  template <class M, class S>
  void operator()(std::size_t j, double, const M& rho, S&) {
    for (std::size_t c = 0; c < marks.size(); ++c) {
      if (marks[c] == j) out[c] = rho;
    }
  }
  void increment(std::size_t, double) {}
};

}  // namespace

SmeStep sme_step(const SystemModel& model, const QuadratureParams& params,
                 const DensityMatrix& rho, double t, double dt, double dw) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
  if (rho.dim() != model.dim) throw Error(ErrorKind::invalid_argument, "state dimension mismatch");
  Stepper<Eigen::Dynamic> stepper(model, params, t + dt);
  ComplexMatrix m = rho.matrix();
  const double dx = stepper.step(m, t, dt, dw);
  return {DensityMatrix::project(m, kClipFloor), dx};
}

Trajectory simulate_trajectory(const SystemModel& model, const QuadratureParams& params,
                               const DensityMatrix& rho0, const SimConfig& cfg,
                               std::uint64_t index) {
  check_inputs(model, rho0, cfg);
  Trajectory traj{cfg.horizon / double(horizon_steps(cfg)), {}, {}, rho0};
  traj.increments.reserve(horizon_steps(cfg));
  traj.currents.reserve(horizon_steps(cfg));
  RecordingObserver rec{traj.increments, traj.currents};
  traj.final_state = dispatch_dim(model.dim, [&](auto d) {
    return run_path<decltype(d)::value>(model, params, rho0, cfg, index, rec);
  });
  return traj;
}

std::vector<double> periodogram(const Trajectory& traj, std::span<const double> mu) {
  std::vector<double> out(mu.size());
  const double horizon = traj.horizon();
  if (horizon <= 0.0) return out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex sum{};
    for (std::size_t j = 0; j < traj.increments.size(); ++j) {
      sum += std::exp(Complex(0.0, mu[i] * traj.dt * double(j))) * traj.increments[j];
    }
    out[i] = std::norm(sum) / horizon;
  }
  return out;
}

SpectrumCurve monte_carlo_spectrum(const SystemModel& model, const QuadratureParams& params,
                                   const DensityMatrix& rho0, const SimConfig& cfg,
                                   std::span<const double> mu, const TrajectoryHook& hook,
                                   std::size_t dump_count) {
  check_inputs(model, rho0, cfg);
  if (cfg.n_traj < 2) {
    throw Error(ErrorKind::invalid_argument, "Monte Carlo spectrum needs at least 2 trajectories");
  }
  const std::size_t n = cfg.n_traj;
  const std::size_t m = mu.size();
  const double dt = cfg.horizon / double(horizon_steps(cfg));
  dump_count = hook ? std::min(dump_count, n) : 0;

  std::vector<std::vector<Complex>> sums(n, std::vector<Complex>(m));
  std::vector<Trajectory> dumps(dump_count, Trajectory{dt, {}, {}, rho0});
  const unsigned workers = cfg.threads ? cfg.threads : default_worker_count();
  detail::parallel_for(n, workers, [&](std::size_t k) {
    FourierObserver obs(mu, dt, sums[k]);
    if (k < dump_count) {
      RecordingObserver r{dumps[k].increments, dumps[k].currents};
      obs.recorder = &r;
      dumps[k].dt = dt;
      const DensityMatrix fin = dispatch_dim(model.dim, [&](auto d) {
        return run_path<decltype(d)::value>(model, params, rho0, cfg, k, obs);
      });
      dumps[k].final_state = fin;
    } else {
      dispatch_dim(model.dim, [&](auto d) {
        return run_path<decltype(d)::value>(model, params, rho0, cfg, k, obs);
      });
    }
  });
  for (std::size_t k = 0; k < dump_count; ++k) hook(k, dumps[k]);

  // Fixed-order reduction.
  const double horizon = cfg.horizon;
  const double dn = double(n);
  std::vector<double> elastic(m), inelastic(m), se_total(m), se_inelastic(m);
  for (std::size_t i = 0; i < m; ++i) {
    Complex mean{};
    for (std::size_t k = 0; k < n; ++k) mean += sums[k][i];
    mean /= dn;
    double p_sum = 0.0, p_sq = 0.0, c_sum = 0.0, c_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double p = std::norm(sums[k][i]) / horizon;
      const double c = std::norm(sums[k][i] - mean) / horizon;
      p_sum += p;
      p_sq += p * p;
      c_sum += c;
      c_sq += c * c;
    }
    const double p_mean = p_sum / dn;
    const double c_mean = c_sum / dn;
    const double p_var = std::max(0.0, (p_sq - dn * p_mean * p_mean) / (dn - 1.0));
    const double c_var = std::max(0.0, (c_sq - dn * c_mean * c_mean) / (dn - 1.0));
    const double bias = dn / (dn - 1.0);
    elastic[i] = std::norm(mean) / horizon;
    inelastic[i] = bias * c_mean;
    se_total[i] = std::sqrt(p_var / dn);
    se_inelastic[i] = bias * std::sqrt(c_var / dn);
  }
  SpectrumCurve curve = assemble_curve({mu.begin(), mu.end()}, std::move(elastic),
                                       std::move(inelastic), horizon, params,
                                       Provenance::monte_carlo);
  curve.stderr_total = std::move(se_total);
  curve.stderr_inelastic = std::move(se_inelastic);
  return curve;
}

EnsembleState ensemble_mean_state(const SystemModel& model, const QuadratureParams& params,
                                  const DensityMatrix& rho0, const SimConfig& cfg,
                                  std::span<const double> checkpoints) {
  check_inputs(model, rho0, cfg);
  const double dt = cfg.horizon / double(horizon_steps(cfg));
  std::vector<std::size_t> marks;
  for (double t : checkpoints) {
    if (t < 0.0 || t > cfg.horizon) {
      throw Error(ErrorKind::invalid_argument, "checkpoint outside [0, horizon]");
    }
    marks.push_back(static_cast<std::size_t>(std::llround(t / dt)));
  }
  const std::size_t n = cfg.n_traj;
  std::vector<std::vector<ComplexMatrix>> snaps(n, std::vector<ComplexMatrix>(marks.size()));


  const unsigned workers = cfg.threads ? cfg.threads : default_worker_count();
  detail::parallel_for(n, workers, [&](std::size_t k) {
    SnapshotObserver obs{marks, snaps[k]};
    const DensityMatrix fin = dispatch_dim(model.dim, [&](auto d) {
      return run_path<decltype(d)::value>(model, params, rho0, cfg, k, obs);
    });
    for (std::size_t c = 0; c < marks.size(); ++c) {
      if (marks[c] >= horizon_steps(cfg)) snaps[k][c] = fin.matrix();
    }
  });

  EnsembleState out;
  const double dn = double(n);
  for (std::size_t c = 0; c < marks.size(); ++c) {
    out.times.push_back(double(marks[c]) * dt);
    ComplexMatrix mean = ComplexMatrix::Zero(model.dim, model.dim);
    for (std::size_t k = 0; k < n; ++k) mean += snaps[k][c];
    mean /= dn;
    Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(model.dim, model.dim);
    Eigen::MatrixXd var_im = Eigen::MatrixXd::Zero(model.dim, model.dim);
    for (std::size_t k = 0; k < n; ++k) {
      const ComplexMatrix dev = snaps[k][c] - mean;
      var_re += dev.real().cwiseAbs2();
      var_im += dev.imag().cwiseAbs2();
    }
    const double denom = n > 1 ? (dn - 1.0) * dn : 1.0;
    out.mean.push_back(mean);
    out.stderr_real.push_back((var_re / denom).cwiseSqrt());
    out.stderr_imag.push_back((var_im / denom).cwiseSqrt());
  }
  return out;
}

}  // namespace homodyne
