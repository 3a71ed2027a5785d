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

#include "homodyne/model_io.hpp"

#include "homodyne/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace homodyne {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_imag_coefficient(std::string_view s) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_double(s);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + message);
}

std::vector<Complex> parse_complex_list(std::string_view value, std::size_t line) {
  std::vector<Complex> out;
  std::string buf(value);
  for (char& c : buf) {
    if (c == ',' || c == ';' || c == '\t') c = ' ';
  }
  std::istringstream is(buf);
  std::string token;
  while (is >> token) {
    try {
      out.push_back(parse_complex(token));
    } catch (const Error& e) {
      fail(line, e.what());
    }
  }
  return out;
}

double parse_number(std::string_view value, std::size_t line, const std::string& key) {
  const auto v = parse_double(trim(value));
  if (!v) fail(line, "'" + key + "' expects a number, got '" + std::string(value) + "'");
  return *v;
}

struct Entry {
  std::string value;
  std::size_t line;
};

ComplexMatrix to_matrix(const std::vector<Complex>& values, Eigen::Index dim, std::size_t line,
                        const std::string& key) {
  if (static_cast<Eigen::Index>(values.size()) != dim * dim) {
    fail(line, "'" + key + "' needs " + std::to_string(dim * dim) + " entries, got " +
                   std::to_string(values.size()));
  }
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = values[std::size_t(r * dim + c)];
  }
  return m;
}

std::size_t parse_index(std::string_view value, std::size_t line, const std::string& key) {
  const double v = parse_number(value, line, key);
  if (v < 1.0 || v != std::floor(v)) fail(line, "'" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

ModelDescription build_two_level(const std::map<std::string, Entry>& entries) {
  TwoLevelParams p;
  std::optional<double> omega0;
  double laser_frequency = 1.0;
  for (const auto& [key, e] : entries) {
    const std::string field = key.substr(std::string("twolevel.").size());
    const double v = parse_number(e.value, e.line, key);
    if (field == "gamma") p.gamma = v;
    else if (field == "p") p.p = v;
    else if (field == "nbar") p.nbar = v;
    else if (field == "kd") p.kd = v;
    else if (field == "omega_rabi") p.omega_rabi = v;
    else if (field == "delta_omega") p.delta_omega = v;
    else if (field == "omega0") omega0 = v;
    else if (field == "laser_frequency") laser_frequency = v;
    else fail(e.line, "unknown key '" + key + "'");
  }
  ModelDescription out;
  try {
    out.model = omega0 ? two_level_lab_model(p, *omega0) : two_level_model(p, laser_frequency);
  } catch (const Error& e) {
    throw Error(ErrorKind::validation, e.what());
  }
  out.two_level = p;
  return out;
}

ModelDescription build_general(const std::map<std::string, Entry>& entries) {
  const auto get = [&](const std::string& key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  const Entry* dim_entry = get("dim");
  if (!dim_entry) throw Error(ErrorKind::parse, "missing required key 'dim'");
  const auto dim = static_cast<Eigen::Index>(parse_index(dim_entry->value, dim_entry->line, "dim"));

  SystemModel m;
  m.dim = dim;
  if (const Entry* h = get("hamiltonian")) {
    m.hamiltonian = to_matrix(parse_complex_list(h->value, h->line), dim, h->line, "hamiltonian");
  } else {
    m.hamiltonian = ComplexMatrix::Zero(dim, dim);
  }

  // channels.N.matrix / channels.N.label
  std::map<std::size_t, ComplexMatrix> matrices;
  std::map<std::size_t, std::string> labels;
  for (const auto& [key, e] : entries) {
    if (key.rfind("channels.", 0) != 0) continue;
    const std::string rest = key.substr(9);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) fail(e.line, "malformed channel key '" + key + "'");
    const std::size_t n = parse_index(rest.substr(0, dot), e.line, key);
    const std::string field = rest.substr(dot + 1);
    if (field == "matrix") {
      matrices[n] = to_matrix(parse_complex_list(e.value, e.line), dim, e.line, key);
    } else if (field == "label") {
      labels[n] = std::string(trim(e.value));
    } else {
      fail(e.line, "unknown key '" + key + "'");
    }
  }
  std::size_t expected = 1;
  for (const auto& [n, mat] : matrices) {
    if (n != expected) {
      throw Error(ErrorKind::parse, "channels must be numbered 1.." + std::to_string(matrices.size()) +
                                        " without gaps (missing channel " +
                                        std::to_string(expected) + ")");
    }
    m.channels.push_back(mat);
    m.labels.push_back(labels.count(n) ? labels[n] : "channel" + std::to_string(n));
    ++expected;
  }
  for (const auto& [n, label] : labels) {
    if (!matrices.count(n)) {
      throw Error(ErrorKind::parse, "label for channel " + std::to_string(n) + " without a matrix");
    }
  }
  const std::size_t d = m.channels.size();

  if (const Entry* s = get("scattering")) {
    if (trim(s->value) != "identity") {
      const auto values = parse_complex_list(s->value, s->line);
      const std::size_t block = std::size_t(dim * dim);
      if (values.size() != d * d * block) {
        fail(s->line, "'scattering' needs " + std::to_string(d * d * block) + " entries, got " +
                          std::to_string(values.size()));
      }
      for (std::size_t b = 0; b < d * d; ++b) {
        std::vector<Complex> chunk(values.begin() + long(b * block),
                                   values.begin() + long((b + 1) * block));
        m.scattering.push_back(to_matrix(chunk, dim, s->line, "scattering"));
      }
    }
  }

  m.drive = DriveFunction::zero(d);
  const Entry* kind = get("drive.kind");
  const std::string kind_value = kind ? std::string(trim(kind->value)) : "zero";
  if (kind_value == "coherent_monochromatic") {
    const Entry* ch = get("drive.channel");
    if (!ch) fail(kind->line, "coherent drive needs 'drive.channel'");
    const std::size_t k = parse_index(ch->value, ch->line, "drive.channel");
    if (k > d) fail(ch->line, "drive.channel out of range");
    Complex amp{};
    double freq = 0.0;
    double cutoff = DriveFunction::kUnbounded;
    if (const Entry* a = get("drive.amplitude")) {
      try {
        amp = parse_complex(trim(a->value));
      } catch (const Error& err) {
        fail(a->line, err.what());
      }
    }
    if (const Entry* f = get("drive.frequency")) freq = parse_number(f->value, f->line, "drive.frequency");
    if (const Entry* c = get("drive.cutoff")) {
      cutoff = parse_number(c->value, c->line, "drive.cutoff");
      if (!(cutoff > 0.0)) fail(c->line, "drive.cutoff must be positive");
    }
    std::vector<Complex> amps(d);
    std::vector<double> freqs(d, 0.0);
    amps[k - 1] = amp;
    freqs[k - 1] = freq;
    m.drive = DriveFunction::monochromatic(std::move(amps), std::move(freqs), cutoff);
  } else if (kind_value != "zero") {
    fail(kind->line, "unknown drive.kind '" + kind_value + "'");
  }

  if (const Entry* o = get("output_channel")) {
    m.output_channel = parse_index(o->value, o->line, "output_channel") - 1;
  }

  for (const auto& [key, e] : entries) {
    static const char* known[] = {"dim", "hamiltonian", "scattering", "drive.kind",
                                  "drive.channel", "drive.amplitude", "drive.frequency",
                                  "drive.cutoff", "output_channel", "frame.omega"};
    bool ok = key.rfind("channels.", 0) == 0;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(e.line, "unknown key '" + key + "'");
  }

  if (const Entry* f = get("frame.omega")) {
    const double omega = parse_number(f->value, f->line, "frame.omega");
    try {
      m = rotating_frame(m, omega);
    } catch (const Error& err) {
      fail(f->line, err.what());
    }
  }

  ModelDescription out;
  out.model = std::move(m);
  return out;
}

}  // namespace

Complex parse_complex(std::string_view token) {
  const std::string_view t = trim(token);
  const auto bad = [&]() -> Error {
    return Error(ErrorKind::parse, "malformed complex number '" + std::string(t) + "'");
  };
  if (t.empty()) throw bad();
  if (t.back() != 'i' && t.back() != 'j') {
    const auto v = parse_double(t);
    if (!v) throw bad();
    return {*v, 0.0};
  }
  const std::string_view body = t.substr(0, t.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    const auto im = parse_imag_coefficient(body);
    if (!im) throw bad();
    return {0.0, *im};
  }
  const auto re = parse_double(body.substr(0, split));
  const auto im = parse_imag_coefficient(body.substr(split));
  if (!re || !im) throw bad();
  return {*re, *im};
}

ModelDescription parse_model(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::vector<std::pair<std::string, std::string>> ordered;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");
    if (entries.count(key)) fail(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
    ordered.emplace_back(key, value);
  }

  bool any_two_level = false;
  bool any_general = false;
  for (const auto& [key, e] : entries) {
    (key.rfind("twolevel.", 0) == 0 ? any_two_level : any_general) = true;
  }
  if (any_two_level && any_general) {
    throw Error(ErrorKind::parse, "twolevel.* keys cannot be mixed with general model keys");
  }
  if (!any_two_level && !any_general) throw Error(ErrorKind::parse, "empty model description");

  ModelDescription out = any_two_level ? build_two_level(entries) : build_general(entries);
  out.entries = std::move(ordered);
  require_valid(out.model);
  return out;
}

ModelDescription load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace homodyne
