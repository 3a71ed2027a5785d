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

// Plain-text model description: one `key = value` per line, `#` comments.
//
//   dim = 2
//   hamiltonian = 1 0  0 -1          # row-major, entries like 1, -2i, 0.5+1e-3i
//   channels.1.matrix = 0 0 1 0
//   channels.1.label = detected
//   scattering = identity           # or d*d row-major blocks, each row-major
//   drive.kind = coherent_monochromatic
//   drive.channel = 1
//   drive.amplitude = 0.5i
//   drive.frequency = 0
//   drive.cutoff = 1e9
//   output_channel = 1
//   frame.omega = 1.0               # optional: move into a rotating frame
//
// Two-level shortcut (expands to the five-channel atom in the laser frame):
//
//   twolevel.gamma, twolevel.p, twolevel.nbar, twolevel.kd,
//   twolevel.omega_rabi, twolevel.delta_omega
//   twolevel.omega0           # optional: build the laboratory-frame model
//   twolevel.laser_frequency  # optional: frame frequency label (default 1)

#include "homodyne/model.hpp"
#include "homodyne/two_level.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace homodyne {

struct ModelDescription {
  SystemModel model;
  std::optional<TwoLevelParams> two_level;
  /// Parsed entries in file order, for echoing into output headers.
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Throws Error(parse) with a line number on malformed input.
ModelDescription parse_model(std::string_view text);
ModelDescription load_model(const std::string& path);

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
Complex parse_complex(std::string_view token);

}  // namespace homodyne
