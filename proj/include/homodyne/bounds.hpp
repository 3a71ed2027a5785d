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

// Numerical check of the uncertainty-type bounds on inelastic spectra at
// conjugate quadrature phases, and detection of squeezing (S^inel < 1).

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace homodyne {

/// S^inel(mu_i; theta) for every mu of a fixed grid.
using InelasticScan = std::function<std::vector<double>(double theta)>;

inline constexpr double kBoundTolerance = 1e-9;

struct BoundSample {
  double mu;
  double theta;
  double s_inel;
  double s_inel_conj;  // at theta + pi/2
  double pair_sum;     // (s + s_conj) / 2
  double product;
};

struct BoundViolation {
  double mu;
  double theta;
  double value;
  std::string bound;  // "pair_sum" or "product", suffixed by the shift sign
};

struct SqueezingRegion {
  double theta;
  double mu_lo;
  double mu_hi;
  double min_value;
  double argmin_mu;
  /// S^inel(theta +- pi/2) > 1 at every point of the region.
  bool conjugate_above_one;
};

struct BoundReport {
  std::vector<double> mu_grid;
  std::vector<double> theta_grid;
  double pair_sum_min = 0.0;
  double product_min = 0.0;
  /// Same minima with the conjugate taken at theta - pi/2.
  double pair_sum_min_minus = 0.0;
  double product_min_minus = 0.0;
  std::vector<BoundViolation> violations;
  std::vector<SqueezingRegion> squeezing_regions;
  /// Row-major over (theta, mu), conjugate at theta + pi/2.
  std::vector<BoundSample> samples;
};

BoundReport check_bounds(const InelasticScan& spectrum, std::span<const double> mu_grid,
                         std::span<const double> theta_grid);

/// Maximal mu-intervals per theta where S^inel < 1 - 1e-9.
std::vector<SqueezingRegion> find_squeezing(const InelasticScan& spectrum,
                                            std::span<const double> mu_grid,
                                            std::span<const double> theta_grid);

/// n points lo..hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// n phases -pi + 2 pi (j+1) / n, j = 0..n-1, covering (-pi, pi].
std::vector<double> theta_grid(std::size_t n);

}  // namespace homodyne
