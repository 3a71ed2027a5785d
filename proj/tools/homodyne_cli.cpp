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

// homodyne_cli: spectra, bound checks and trajectory dumps from a model file.

#include "homodyne.h"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string command;
  std::string model_path;
  double mu_min = -10.0;
  double mu_max = 10.0;
  std::size_t mu_steps = 201;
  double theta = 0.0;
  std::size_t theta_scan = 0;
  double horizon = 100.0;
  double step = 1e-3;
  std::size_t trajectories = 100;
  std::uint64_t seed = 0;
  std::string output;
  bool deterministic = false;
  std::size_t dump_trajectories = 0;
  bool no_renormalize = false;
  std::string source = "auto";
};

/// Carries a C status out of the command handlers.
struct Failure {
  hd_status status;
  std::string message;
};

void check(hd_status status) {
  if (status != HD_OK) throw Failure{status, hd_last_error()};
}

int exit_code(hd_status status) {
  switch (status) {
    case HD_OK: return kExitOk;
    case HD_NUMERICAL:
    case HD_INTERNAL: return kExitNumerical;
    default: return kExitValidation;
  }
}

struct ModelDeleter {
  void operator()(hd_model* m) const { hd_model_free(m); }
};
struct CurveDeleter {
  void operator()(hd_curve* c) const { hd_curve_free(c); }
};
struct ReportDeleter {
  void operator()(hd_bound_report* r) const { hd_bound_report_free(r); }
};
using ModelPtr = std::unique_ptr<hd_model, ModelDeleter>;
using CurvePtr = std::unique_ptr<hd_curve, CurveDeleter>;
using ReportPtr = std::unique_ptr<hd_bound_report, ReportDeleter>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

class Run {
 public:
  explicit Run(const Options& opt) : opt_(opt) {}

  int execute() {
    if (opt_.mu_steps < 2) throw Failure{HD_INVALID_ARGUMENT, "--mu-steps must be at least 2"};
    if (!(opt_.mu_min < opt_.mu_max)) {
      throw Failure{HD_INVALID_ARGUMENT, "--mu-min must be below --mu-max"};
    }
    hd_model* raw = nullptr;
    check(hd_model_load(opt_.model_path.c_str(), &raw));
    model_.reset(raw);
    check(hd_model_validate(model_.get()));

    mu_.resize(opt_.mu_steps);
    check(hd_uniform_grid(opt_.mu_min, opt_.mu_max, opt_.mu_steps, mu_.data()));
    if (opt_.theta_scan > 0) {
      thetas_.resize(opt_.theta_scan);
      check(hd_theta_grid(opt_.theta_scan, thetas_.data()));
    } else {
      thetas_ = {opt_.theta};
    }
    evo_ = hd_evolution_config_default();
    evo_.step = opt_.step;
    evo_.renormalize = opt_.no_renormalize ? 0 : 1;

    header();
    if (opt_.command == "analytic") return analytic();
    if (opt_.command == "finite-t") return finite_t();
    if (opt_.command == "simulate") return simulate();
    if (opt_.command == "check-bounds") return check_bounds();
    return compare();
  }

  void write(std::ostream& os) const { os << out_.str(); }

 private:
  void header() {
    out_ << "# homodyne " << hd_version() << '\n';
    out_ << "# command = " << opt_.command << '\n';
    out_ << "# model_path = " << opt_.model_path << '\n';
    for (std::size_t i = 0; i < hd_model_entry_count(model_.get()); ++i) {
      const char* key = nullptr;
      const char* value = nullptr;
      check(hd_model_entry(model_.get(), i, &key, &value));
      out_ << "# model." << key << " = " << value << '\n';
    }
    out_ << "# mu_min = " << fmt(opt_.mu_min) << '\n'
         << "# mu_max = " << fmt(opt_.mu_max) << '\n'
         << "# mu_steps = " << opt_.mu_steps << '\n';
    if (opt_.theta_scan > 0) {
      out_ << "# theta_scan = " << opt_.theta_scan << '\n';
    } else {
      out_ << "# theta = " << fmt(opt_.theta) << '\n';
    }
    out_ << "# horizon = " << fmt(opt_.horizon) << '\n'
         << "# step = " << fmt(opt_.step) << '\n'
         << "# renormalize = " << (opt_.no_renormalize ? "false" : "true") << '\n';
    if (opt_.command == "simulate" || opt_.command == "compare") {
      out_ << "# trajectories = " << opt_.trajectories << '\n'
           << "# seed = " << opt_.seed << '\n';
    }
    if (!opt_.deterministic) {
      const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      out_ << "# generated = " << buf << '\n';
    }
  }

  hd_two_level_params two_level() const {
    hd_two_level_params p{};
    check(hd_model_get_two_level(model_.get(), &p));
    return p;
  }

  ReportPtr bounds(hd_bound_source source) const {
    hd_bound_report* raw = nullptr;
    check(hd_check_bounds(model_.get(), source, mu_.data(), mu_.size(), thetas_.data(),
                          thetas_.size(), opt_.horizon, &evo_, &raw));
    return ReportPtr(raw);
  }

  void sample_table(const hd_bound_report* report) {
    out_ << "mu,theta,s_inel,s_inel_conj,pair_sum,product\n";
    for (std::size_t i = 0; i < hd_bound_report_sample_count(report); ++i) {
      hd_bound_sample s{};
      check(hd_bound_report_sample(report, i, &s));
      out_ << fmt(s.mu) << ',' << fmt(s.theta) << ',' << fmt(s.s_inel) << ','
           << fmt(s.s_inel_conj) << ',' << fmt(s.pair_sum) << ',' << fmt(s.product) << '\n';
    }
  }

  int analytic() {
    const hd_two_level_params p = two_level();
    for (double theta : thetas_) {
      double w = 0.0;
      check(hd_analytic_elastic_weight(&p, theta, &w));
      out_ << "# elastic_delta_weight = " << fmt(w);
      if (thetas_.size() > 1) out_ << " theta = " << fmt(theta);
      out_ << '\n';
      // Routed through a curve so the usual invariants are enforced.
      hd_curve* raw = nullptr;
      check(hd_analytic_curve(&p, theta, mu_.data(), mu_.size(), &raw));
      hd_curve_free(raw);
    }
    sample_table(bounds(HD_SOURCE_ANALYTIC).get());
    return kExitOk;
  }

  int check_bounds() {
    hd_bound_source source = hd_model_is_two_level(model_.get()) ? HD_SOURCE_ANALYTIC
                                                                  : HD_SOURCE_FINITE_T;
    if (opt_.source == "analytic") source = HD_SOURCE_ANALYTIC;
    if (opt_.source == "finite-t") source = HD_SOURCE_FINITE_T;
    const ReportPtr report = bounds(source);
    double pair = 0, product = 0, pair_minus = 0, product_minus = 0;
    hd_bound_report_minima(report.get(), &pair, &product, &pair_minus, &product_minus);
    const std::size_t violations = hd_bound_report_violation_count(report.get());
    const std::size_t regions = hd_bound_report_squeezing_count(report.get());
    char line[256];
    std::ostringstream summary;
    summary << "source = " << (source == HD_SOURCE_ANALYTIC ? "analytic" : "finite-t") << '\n';
    std::snprintf(line, sizeof line, "pair_sum_min = %.9f\nproduct_min = %.9f\n", pair, product);
    summary << line;
    std::snprintf(line, sizeof line, "pair_sum_min_minus = %.9f\nproduct_min_minus = %.9f\n",
                  pair_minus, product_minus);
    summary << line << "violations = " << violations << '\n'
            << "squeezing_regions = " << regions << '\n';
    for (std::size_t i = 0; i < regions; ++i) {
      hd_squeezing_region r{};
      check(hd_bound_report_squeezing(report.get(), i, &r));
      std::snprintf(line, sizeof line,
                    "  theta = %.6f mu in [%.6f, %.6f] min %.9f at mu = %.6f conjugate_above_one = %s\n",
                    r.theta, r.mu_lo, r.mu_hi, r.min_value, r.argmin_mu,
                    r.conjugate_above_one ? "true" : "false");
      summary << line;
    }
    for (std::size_t i = 0; i < violations; ++i) {
      double mu = 0, theta = 0, value = 0;
      const char* bound = nullptr;
      check(hd_bound_report_violation(report.get(), i, &mu, &theta, &value, &bound));
      std::snprintf(line, sizeof line, "  violation %s = %.12f at mu = %.6f theta = %.6f\n",
                    bound, value, mu, theta);
      summary << line;
    }
    std::istringstream lines(summary.str());
    for (std::string l; std::getline(lines, l);) out_ << "# " << l << '\n';
    sample_table(report.get());
    std::cout << summary.str();
    return violations == 0 ? kExitOk : kExitNumerical;
  }

  CurvePtr finite_curve(double theta) const {
    const hd_quadrature q{theta, 0, 0.0};
    hd_curve* raw = nullptr;
    check(hd_spectrum_finite(model_.get(), &q, opt_.horizon, mu_.data(), mu_.size(), &evo_, &raw));
    return CurvePtr(raw);
  }

  CurvePtr monte_carlo_curve(double theta, std::size_t dumps) const {
    const hd_quadrature q{theta, 0, 0.0};
    hd_sim_config sim = hd_sim_config_default();
    sim.dt = opt_.step;
    sim.horizon = opt_.horizon;
    sim.n_traj = opt_.trajectories;
    sim.seed = opt_.seed;
    hd_curve* raw = nullptr;
    check(hd_spectrum_monte_carlo(model_.get(), &q, nullptr, nullptr, &sim, mu_.data(),
                                  mu_.size(), dumps, dumps ? &Run::dump : nullptr,
                                  const_cast<Run*>(this), &raw));
    return CurvePtr(raw);
  }

  static void dump(void* user, size_t index, double dt, const double* dx, size_t count) {
    const auto* self = static_cast<const Run*>(user);
    const std::string path = self->opt_.output + ".traj" + std::to_string(index) + ".csv";
    std::ofstream os(path);
    os << "t,dX\n";
    for (std::size_t j = 0; j < count; ++j) os << fmt(dt * double(j)) << ',' << fmt(dx[j]) << '\n';
    if (!os) std::cerr << "homodyne: cannot write " << path << '\n';
  }

  int finite_t() {
    out_ << "mu,theta,total,elastic,inelastic\n";
    for (double theta : thetas_) {
      const CurvePtr c = finite_curve(theta);
      for (std::size_t i = 0; i < hd_curve_size(c.get()); ++i) {
        out_ << fmt(hd_curve_mu(c.get())[i]) << ',' << fmt(theta) << ','
             << fmt(hd_curve_total(c.get())[i]) << ',' << fmt(hd_curve_elastic(c.get())[i]) << ','
             << fmt(hd_curve_inelastic(c.get())[i]) << '\n';
      }
    }
    return kExitOk;
  }

  int simulate() {
    if (opt_.dump_trajectories > 0 && opt_.output.empty()) {
      throw Failure{HD_INVALID_ARGUMENT, "--dump-trajectories needs --output"};
    }
    out_ << "mu,theta,total,elastic,inelastic,stderr_total,stderr_inelastic\n";
    bool first = true;
    for (double theta : thetas_) {
      const CurvePtr c = monte_carlo_curve(theta, first ? opt_.dump_trajectories : 0);
      first = false;
      for (std::size_t i = 0; i < hd_curve_size(c.get()); ++i) {
        out_ << fmt(hd_curve_mu(c.get())[i]) << ',' << fmt(theta) << ','
             << fmt(hd_curve_total(c.get())[i]) << ',' << fmt(hd_curve_elastic(c.get())[i]) << ','
             << fmt(hd_curve_inelastic(c.get())[i]) << ','
             << fmt(hd_curve_stderr_total(c.get())[i]) << ','
             << fmt(hd_curve_stderr_inelastic(c.get())[i]) << '\n';
      }
    }
    return kExitOk;
  }

  int compare() {
    const hd_two_level_params p = two_level();
    std::ostringstream rows;
    rows << "mu,theta,analytic,finite_t,monte_carlo,monte_carlo_stderr\n";
    double sup_finite = 0.0, sup_finite_rel = 0.0, sup_mc = 0.0, sup_mc_z = 0.0;
    for (double theta : thetas_) {
      std::vector<double> exact(mu_.size());
      check(hd_analytic_inelastic(&p, theta, mu_.data(), mu_.size(), exact.data()));
      const CurvePtr fin = finite_curve(theta);
      const CurvePtr mc = monte_carlo_curve(theta, 0);
      const double* f = hd_curve_inelastic(fin.get());
      const double* m = hd_curve_inelastic(mc.get());
      const double* se = hd_curve_stderr_inelastic(mc.get());
      for (std::size_t i = 0; i < mu_.size(); ++i) {
        sup_finite = std::max(sup_finite, std::abs(f[i] - exact[i]));
        sup_finite_rel = std::max(sup_finite_rel, std::abs(f[i] - exact[i]) / std::abs(exact[i]));
        sup_mc = std::max(sup_mc, std::abs(m[i] - exact[i]));
        if (se[i] > 0.0) sup_mc_z = std::max(sup_mc_z, std::abs(m[i] - exact[i]) / se[i]);
        rows << fmt(mu_[i]) << ',' << fmt(theta) << ',' << fmt(exact[i]) << ',' << fmt(f[i])
             << ',' << fmt(m[i]) << ',' << fmt(se[i]) << '\n';
      }
    }
    std::ostringstream summary;
    summary << "sup |finite_t - analytic| = " << fmt(sup_finite) << '\n'
            << "sup |finite_t - analytic| / analytic = " << fmt(sup_finite_rel) << '\n'
            << "sup |monte_carlo - analytic| = " << fmt(sup_mc) << '\n'
            << "sup |monte_carlo - analytic| / stderr = " << fmt(sup_mc_z) << '\n';
    std::istringstream lines(summary.str());
    for (std::string l; std::getline(lines, l);) out_ << "# " << l << '\n';
    out_ << rows.str();
    std::cout << summary.str();
    return kExitOk;
  }

  const Options& opt_;
  ModelPtr model_;
  std::vector<double> mu_;
  std::vector<double> thetas_;
  hd_evolution_config evo_{};
  std::ostringstream out_;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("model", opt.model_path, "Model description file")->required();
  cmd->add_option("--mu-min", opt.mu_min, "Lowest analysis frequency");
  cmd->add_option("--mu-max", opt.mu_max, "Highest analysis frequency");
  cmd->add_option("--mu-steps", opt.mu_steps, "Number of frequencies (>= 2)");
  auto* theta = cmd->add_option("--theta", opt.theta, "Local-oscillator phase");
  cmd->add_option("--theta-scan", opt.theta_scan, "Scan N phases over (-pi, pi]")
      ->excludes(theta);
  cmd->add_option("--horizon", opt.horizon, "Observation time T");
  cmd->add_option("--step", opt.step, "Integration step (also the SME time step)");
  cmd->add_option("--output", opt.output, "Output CSV path (default: stdout)");
  cmd->add_flag("--deterministic", opt.deterministic, "Omit the timestamp line");
  cmd->add_flag("--no-renormalize", opt.no_renormalize, "Skip per-step trace renormalization");
}

void add_simulation(CLI::App* cmd, Options& opt) {
  cmd->add_option("--trajectories", opt.trajectories, "Number of trajectories");
  cmd->add_option("--seed", opt.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homodyne spectra of open quantum systems"};
  app.require_subcommand(1);
  Options opt;

  auto* analytic = app.add_subcommand("analytic", "Closed-form two-level spectrum");
  add_common(analytic, opt);
  auto* finite = app.add_subcommand("finite-t", "Finite-horizon spectrum from the master equation");
  add_common(finite, opt);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo spectrum from trajectories");
  add_common(simulate, opt);
  add_simulation(simulate, opt);
  simulate->add_option("--dump-trajectories", opt.dump_trajectories,
                       "Write the first N records to <output>.trajK.csv");
  auto* bounds = app.add_subcommand("check-bounds", "Check the conjugate-phase bounds");
  add_common(bounds, opt);
  bounds->add_option("--source", opt.source, "Spectrum source")
      ->check(CLI::IsMember({"auto", "analytic", "finite-t"}));
  auto* compare = app.add_subcommand("compare", "Analytic, finite-T and Monte Carlo side by side");
  add_common(compare, opt);
  add_simulation(compare, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  opt.command = app.get_subcommands().front()->get_name();

  try {
    Run run(opt);
    const int code = run.execute();
    if (opt.output.empty()) {
      run.write(std::cout);
    } else {
      std::ofstream os(opt.output);
      run.write(os);
      if (!os) {
        std::cerr << "homodyne: cannot write " << opt.output << '\n';
        return kExitValidation;
      }
    }
    return code;
  } catch (const Failure& f) {
    std::cerr << "homodyne: " << hd_status_name(f.status) << ": " << f.message << '\n';
    return exit_code(f.status);
  }
}
