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

// Internal helpers shared by the integrators.

#include "homodyne/linalg.hpp"
#include "homodyne/model.hpp"

#include <optional>

namespace homodyne::detail {

/// L(t) as a dense matrix, built once when the drive is constant over the
/// requested horizon.
class LiouvillianField {
 public:
  LiouvillianField(const SystemModel& model, double horizon)
      : model_(model) {
    if (liouvillian_constant_on(model, horizon)) {
      constant_ = build_liouvillian(model, 0.0).matrix();
    }
  }

  bool constant() const noexcept { return constant_.has_value(); }

  const ComplexMatrix& at(double t) {
    if (constant_) return *constant_;
    scratch_ = build_liouvillian(model_, t).matrix();
    return scratch_;
  }

 private:
  const SystemModel& model_;
  std::optional<ComplexMatrix> constant_;
  ComplexMatrix scratch_;
};

/// Steady state from a dense Liouvillian matrix (see steady_state()).
DensityMatrix null_state(const ComplexMatrix& liouvillian, Eigen::Index dim);

/// One classical RK4 step for y' = f(t, y).
template <class State, class Rhs>
void rk4_step(State& y, double t, double h, Rhs&& f) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace homodyne::detail
