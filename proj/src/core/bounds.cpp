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

#include "homodyne/bounds.hpp"

#include "homodyne/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace homodyne {

namespace {

constexpr double kQuarterTurn = 0.5 * std::numbers::pi;

std::vector<double> scan_checked(const InelasticScan& spectrum, double theta, std::size_t n) {
  std::vector<double> s = spectrum(theta);
  if (s.size() != n) {
    throw Error(ErrorKind::invalid_argument, "spectrum scan returned the wrong number of points");
  }
  return s;
}

void collect_regions(double theta, std::span<const double> mu, const std::vector<double>& s,
                     const std::vector<double>& plus, const std::vector<double>& minus,
                     std::vector<SqueezingRegion>& out) {
  std::size_t i = 0;
  while (i < mu.size()) {
    if (!(s[i] < 1.0 - kBoundTolerance)) {
      ++i;
      continue;
    }
    SqueezingRegion r{theta, mu[i], mu[i], s[i], mu[i], true};
    for (; i < mu.size() && s[i] < 1.0 - kBoundTolerance; ++i) {
      r.mu_hi = mu[i];
      if (s[i] < r.min_value) {
        r.min_value = s[i];
        r.argmin_mu = mu[i];
      }
      r.conjugate_above_one = r.conjugate_above_one && plus[i] > 1.0 && minus[i] > 1.0;
    }
    out.push_back(r);
  }
}

}  // namespace

BoundReport check_bounds(const InelasticScan& spectrum, std::span<const double> mu_grid,
                         std::span<const double> theta_grid) {
  BoundReport report;
  report.mu_grid.assign(mu_grid.begin(), mu_grid.end());
  report.theta_grid.assign(theta_grid.begin(), theta_grid.end());
  constexpr double inf = std::numeric_limits<double>::infinity();
  report.pair_sum_min = report.product_min = inf;
  report.pair_sum_min_minus = report.product_min_minus = inf;
  report.samples.reserve(mu_grid.size() * theta_grid.size());

  const std::size_t n = mu_grid.size();
  for (double theta : theta_grid) {
    const auto s = scan_checked(spectrum, theta, n);
    const auto plus = scan_checked(spectrum, theta + kQuarterTurn, n);
    const auto minus = scan_checked(spectrum, theta - kQuarterTurn, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double pair_plus = 0.5 * (s[i] + plus[i]);
      const double prod_plus = s[i] * plus[i];
      const double pair_minus = 0.5 * (s[i] + minus[i]);
      const double prod_minus = s[i] * minus[i];
      report.samples.push_back({mu_grid[i], theta, s[i], plus[i], pair_plus, prod_plus});
      report.pair_sum_min = std::min(report.pair_sum_min, pair_plus);
      report.product_min = std::min(report.product_min, prod_plus);
      report.pair_sum_min_minus = std::min(report.pair_sum_min_minus, pair_minus);
      report.product_min_minus = std::min(report.product_min_minus, prod_minus);
      const auto flag = [&](double value, const char* bound) {
        if (value < 1.0 - kBoundTolerance) {
          report.violations.push_back({mu_grid[i], theta, value, bound});
        }
      };
      flag(pair_plus, "pair_sum(+pi/2)");
      flag(prod_plus, "product(+pi/2)");
      flag(pair_minus, "pair_sum(-pi/2)");
      flag(prod_minus, "product(-pi/2)");
    }
    collect_regions(theta, mu_grid, s, plus, minus, report.squeezing_regions);
  }
  return report;
}

std::vector<SqueezingRegion> find_squeezing(const InelasticScan& spectrum,
                                            std::span<const double> mu_grid,
                                            std::span<const double> theta_grid) {
  std::vector<SqueezingRegion> out;
  const std::size_t n = mu_grid.size();
  for (double theta : theta_grid) {
    const auto s = scan_checked(spectrum, theta, n);
    const auto plus = scan_checked(spectrum, theta + kQuarterTurn, n);
    const auto minus = scan_checked(spectrum, theta - kQuarterTurn, n);
    collect_regions(theta, mu_grid, s, plus, minus, out);
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo < hi)) {
    throw Error(ErrorKind::invalid_argument, "grid needs at least 2 points and lo < hi");
  }
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * double(i) / double(n - 1);
  }
  // Exact mirror symmetry when lo = -hi.
  if (lo == -hi) {
    for (std::size_t i = 0; i < n / 2; ++i) g[n - 1 - i] = -g[i];
    if (n % 2 == 1) g[n / 2] = 0.0;
  }
  return g;
}

std::vector<double> theta_grid(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "theta grid needs at least one point");
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = -std::numbers::pi + 2.0 * std::numbers::pi * double(j + 1) / double(n);
  }
  return g;
}

}  // namespace homodyne
