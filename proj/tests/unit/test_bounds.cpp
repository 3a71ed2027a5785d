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

#include "helpers.hpp"

#include "homodyne/bounds.hpp"
#include "homodyne/error.hpp"

#include <doctest.h>

#include <memory>

using namespace homodyne;
using namespace testing;

namespace {

InelasticScan analytic_scan(const TwoLevelParams& p, const std::vector<double>& mu) {
  auto spec = std::make_shared<TwoLevelSpectrum>(p);
  return [spec, mu](double theta) { return spec->inelastic(theta, mu); };
}

}  // namespace

TEST_CASE("grids") {
  const auto g = uniform_grid(-2.0, 2.0, 5);
  CHECK(g == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
  const auto big = uniform_grid(-10.0, 10.0, 2001);
  for (std::size_t i = 0; i < big.size(); ++i) CHECK(big[i] == -big[big.size() - 1 - i]);
  CHECK(big[1000] == 0.0);
  CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 3), Error);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), Error);

  const auto t = theta_grid(4);
  CHECK(t[0] == doctest::Approx(-kPi / 2));
  CHECK(t[1] == doctest::Approx(0.0));
  CHECK(t[3] == doctest::Approx(kPi));
  CHECK_THROWS_AS(theta_grid(0), Error);
}

TEST_CASE("flat spectrum saturates both bounds") {
  const auto mu = uniform_grid(-3.0, 3.0, 7);
  const auto r = check_bounds([&](double) { return std::vector<double>(mu.size(), 1.0); }, mu,
                              theta_grid(8));
  CHECK(r.pair_sum_min == 1.0);
  CHECK(r.product_min == 1.0);
  CHECK(r.pair_sum_min_minus == 1.0);
  CHECK(r.product_min_minus == 1.0);
  CHECK(r.violations.empty());
  CHECK(r.squeezing_regions.empty());
  CHECK(r.samples.size() == 56);
}

TEST_CASE("violations are reported") {
  const auto mu = uniform_grid(-1.0, 1.0, 3);
  const auto r = check_bounds([&](double) { return std::vector<double>(mu.size(), 0.5); }, mu,
                              theta_grid(2));
  CHECK(r.product_min == doctest::Approx(0.25));
  CHECK(r.pair_sum_min == doctest::Approx(0.5));
  CHECK(r.violations.size() == 2 * 3 * 4);
  CHECK(r.violations.front().bound == "pair_sum(+pi/2)");
  // Every point is below one, so each theta yields one region spanning the grid.
  REQUIRE(r.squeezing_regions.size() == 2);
  CHECK(r.squeezing_regions[0].mu_lo == -1.0);
  CHECK(r.squeezing_regions[0].mu_hi == 1.0);
  CHECK_FALSE(r.squeezing_regions[0].conjugate_above_one);
}

TEST_CASE("squeezing regions with a synthetic dip") {
  const auto mu = uniform_grid(-4.0, 4.0, 81);
  // S = exp(-cos(2 theta) / (1 + mu^2)) saturates the product bound.
  const InelasticScan scan = [&](double theta) {
    std::vector<double> s;
    for (double f : mu) s.push_back(std::exp(-std::cos(2 * theta) / (1.0 + f * f)));
    return s;
  };
  const auto r = check_bounds(scan, mu, std::vector<double>{0.0, kPi / 2});
  CHECK(r.violations.empty());
  REQUIRE(r.squeezing_regions.size() == 1);
  const auto& reg = r.squeezing_regions[0];
  CHECK(reg.theta == 0.0);
  CHECK(reg.mu_lo == -4.0);
  CHECK(reg.mu_hi == 4.0);
  CHECK(reg.min_value == doctest::Approx(std::exp(-1.0)));
  CHECK(reg.argmin_mu == 0.0);
  CHECK(reg.conjugate_above_one);
  CHECK(find_squeezing(scan, mu, std::vector<double>{0.0, kPi / 2}).size() == 1);
}

TEST_CASE("scan size mismatch") {
  const auto mu = uniform_grid(-1.0, 1.0, 3);
  CHECK_THROWS_AS(check_bounds([](double) { return std::vector<double>(2, 1.0); }, mu, theta_grid(2)),
                  Error);
}

TEST_CASE("two-level parameter sets obey the bounds and squeeze") {
  const auto mu = uniform_grid(-10.0, 10.0, 401);
  const auto thetas = theta_grid(64);
  for (const auto& p : {fig1_params(), fig2_params()}) {
    const auto r = check_bounds(analytic_scan(p, mu), mu, thetas);
    CHECK(r.violations.empty());
    CHECK(r.product_min >= 1.0 - kBoundTolerance);
    CHECK_FALSE(r.squeezing_regions.empty());
    for (const auto& reg : r.squeezing_regions) CHECK(reg.conjugate_above_one);
    CHECK(std::abs(r.pair_sum_min - r.pair_sum_min_minus) <= 1e-12);
    CHECK(std::abs(r.product_min - r.product_min_minus) <= 1e-12);
  }
}

TEST_CASE("undriven atom is flat") {
  const auto mu = uniform_grid(-10.0, 10.0, 201);
  const auto r = check_bounds(analytic_scan(undriven_params(), mu), mu, theta_grid(16));
  CHECK(r.product_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.squeezing_regions.empty());
}
