// Copyright 2026 The onestep Authors
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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "onestep/calibrate.hpp"
#include "onestep/constructions.hpp"
#include "onestep/error.hpp"
#include "onestep/gates.hpp"
#include "onestep/hamiltonian.hpp"
#include "onestep/noise.hpp"
#include "onestep/optimize.hpp"
#include "onestep/sweep.hpp"

namespace onestep {

using Json = nlohmann::ordered_json;

inline constexpr std::array<std::string_view, 6> kConstructionNames = {
    "cnot_refined",   "cnot_printed",      "bgate_printed",
    "bgate_projected", "bgate_reoptimized", "cnot_class"};


struct TimeSettings {
  /// Run length; unset means the pulse duration t0 (or the protocol length).
  std::optional<double> t_final;
  int samples = 100;
  double dt = 0.0;  // 0: t0 / 2000
  bool verify_halving = true;
};

struct CnotClassSettings {
  double j = 2.0;
  double delta = 1.0;
  CouplingSigns signs = CouplingSigns::kCorrected;
};

struct OptimizeSettings {
  std::vector<FreeVariable> free;
  MatchMode match = MatchMode::kExact;
  Degeneracy constraint = Degeneracy::kNone;
  std::optional<double> coupling_norm;
  double distance_weight = 1.0;
  double purity_weight = 0.0;
  double penalty_weight = 100.0;
  int restarts = 16;
  int max_evaluations = 4000;
  double threshold = 1e-6;
};

struct SensitivitySettings {
  double budget = 1e-4;
  double step = 1e-3;
};

struct OutputSettings {
  std::string dir;
  std::string prefix;
};

/// Everything a run needs; a run is reproducible from this plus the seed.
struct RunConfig {
  std::string experiment;
  std::string command;
  std::optional<std::string> construction;
  HamiltonianParams params;
  NoiseModel noise;
  std::string target = "CNOT";
  std::string protocol = "onestep";  // onestep | fivestep | compare
  std::optional<double> amplitude_bound;
  TimeSettings time;
  SweepGrid sweep;
  OptimizeSettings optimize;
  SensitivitySettings sensitivity;
  Device device;
  CnotClassSettings cnot_class;
  /// Classification tolerance for spectrum reports, parameter units.
  double degeneracy_tol = kDefaultDegeneracyTol;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  OutputSettings output;
};

namespace detail {

/// 1-based line of the first occurrence of `"key"` in the source text.
inline int line_of_key(std::string_view text, std::string_view key) {
  if (text.empty()) return 0;
  const std::string quoted = "\"" + std::string(key) + "\"";
  const std::size_t pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Strict reader over one JSON object: every key must be consumed.
class Reader {
 public:
  Reader(const Json& j, std::string path, std::string_view text)
      : j_(j), path_(std::move(path)), text_(text) {
    if (!j_.is_object()) error(path_, "expected an object");
  }

  [[noreturn]] void error(const std::string& key, const std::string& what) const {
    const std::string leaf = key.substr(key.find_last_of('.') + 1);
    const int line = line_of_key(text_, leaf);
    fail(ErrorKind::kConfig, (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                                 "'" + key + "': " + what);
  }

  std::string path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json* find(std::string_view key) {
    used_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  void number(std::string_view key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) error(path(key), "expected a number");
      out = v->get<double>();
    }
  }
  void number(std::string_view key, std::optional<double>& out) {
    if (const Json* v = find(key)) {
      if (v->is_null()) { out.reset(); return; }
      if (!v->is_number()) error(path(key), "expected a number or null");
      out = v->get<double>();
    }
  }
  template <typename Int>
  void integer(std::string_view key, Int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) error(path(key), "expected an integer");
      if (v->is_number_unsigned()) {
        out = static_cast<Int>(v->get<std::uint64_t>());
      } else {
        const auto x = v->get<std::int64_t>();
        if (x < 0 && std::is_unsigned_v<Int>) error(path(key), "must be non-negative");
        out = static_cast<Int>(x);
      }
    }
  }
  void boolean(std::string_view key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) error(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(std::string_view key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) error(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void string(std::string_view key, std::optional<std::string>& out) {
    if (const Json* v = find(key)) {
      if (v->is_null()) { out.reset(); return; }
      if (!v->is_string()) error(path(key), "expected a string or null");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) error(path(it.key()), "unknown key");
  }

  std::string_view text() const { return text_; }

 private:
  const Json& j_;
  std::string path_;
  std::string_view text_;
  std::set<std::string> used_;
};

inline Control control_or_fail(Reader& r, const std::string& key, const std::string& name) {
  if (auto c = parse_control(name)) return *c;
  r.error(key, "unknown control '" + name + "'");
}

inline void read_axis(Reader& parent, std::string_view key, Axis1D& axis) {
  const Json* v = parent.find(key);
  if (!v) return;
  Reader r(*v, parent.path(key), parent.text());
  std::string name(control_name(axis.control));
  r.string("control", name);
  axis.control = control_or_fail(r, r.path("control"), name);
  r.number("min", axis.min);
  r.number("max", axis.max);
  r.integer("points", axis.points);
  r.finish();
}

inline std::string_view to_string(MatchMode m) {
  return m == MatchMode::kExact ? "exact" : "equivalence";
}

inline std::string_view to_string(CouplingSigns s) {
  return s == CouplingSigns::kCorrected ? "corrected" : "printed";
}

}  // namespace detail

/// Parameters of a named construction.
inline HamiltonianParams construction_params(std::string_view name,
                                             const CnotClassSettings& cc = {}) {
  if (name == "cnot_refined") return onestep_cnot(true).params;
  if (name == "cnot_printed") return onestep_cnot(false).params;
  if (name == "bgate_printed") return onestep_bgate(BGateVariant::kPrinted).params;
  if (name == "bgate_projected") return onestep_bgate(BGateVariant::kProjected).params;
  if (name == "bgate_reoptimized") return onestep_bgate(BGateVariant::kReoptimized).params;
  if (name == "cnot_class") return cnot_class_pulse(cc.j, cc.delta, cc.signs).params;
  fail(ErrorKind::kUnknownName, "unknown construction '" + std::string(name) + "'");
}

/// Parses a config document. Keys are checked strictly; errors carry the
/// key path and, where it can be located, the source line.
inline RunConfig parse_run_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/false);
  } catch (const Json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    fail(ErrorKind::kConfig, "line " + std::to_string(line) + ": malformed JSON (" +
                                 std::string(e.what()) + ")");
  }
  RunConfig c;
  detail::Reader r(j, "", text);
  r.string("experiment", c.experiment);
  r.string("command", c.command);

  if (const Json* v = r.find("cnot_class")) {
    detail::Reader s(*v, "cnot_class", text);
    s.number("j", c.cnot_class.j);
    s.number("delta", c.cnot_class.delta);
    std::string signs(detail::to_string(c.cnot_class.signs));
    s.string("signs", signs);
    if (signs == "corrected") c.cnot_class.signs = CouplingSigns::kCorrected;
    else if (signs == "printed") c.cnot_class.signs = CouplingSigns::kPrinted;
    else s.error("cnot_class.signs", "expected 'corrected' or 'printed'");
    s.finish();
  }

  r.string("construction", c.construction);
  if (c.construction) {
    const bool known = std::find(kConstructionNames.begin(), kConstructionNames.end(),
                                 *c.construction) != kConstructionNames.end();
    if (!known) r.error("construction", "unknown construction '" + *c.construction + "'");
    c.params = construction_params(*c.construction, c.cnot_class);
  }
  if (const Json* v = r.find("hamiltonian")) {
    detail::Reader h(*v, "hamiltonian", text);
    for (Control k : {Control::kDelta1, Control::kDelta2, Control::kEps1, Control::kEps2,
                      Control::kJx, Control::kJy, Control::kJz, Control::kT0})
      h.number(control_name(k), c.params[k]);
    h.finish();
  }
  if (const Json* v = r.find("noise")) {
    detail::Reader n(*v, "noise", text);
    n.number("alpha", c.noise.alpha);
    n.number("temperature", c.noise.temperature);
    n.number("cutoff", c.noise.cutoff);
    n.boolean("include_lamb_shift", c.noise.include_lamb_shift);
    n.finish();
  }
  r.string("target", c.target);
  if (std::find(kGateNames.begin(), kGateNames.end(), c.target) == kGateNames.end())
    r.error("target", "unknown gate '" + c.target + "'");
  r.string("protocol", c.protocol);
  if (c.protocol != "onestep" && c.protocol != "fivestep" && c.protocol != "compare")
    r.error("protocol", "expected 'onestep', 'fivestep' or 'compare'");
  r.number("amplitude_bound", c.amplitude_bound);
  if (const Json* v = r.find("time")) {
    detail::Reader t(*v, "time", text);
    t.number("t_final", c.time.t_final);
    t.integer("samples", c.time.samples);
    t.number("dt", c.time.dt);
    t.boolean("verify_halving", c.time.verify_halving);
    t.finish();
  }
  if (const Json* v = r.find("sweep")) {
    detail::Reader s(*v, "sweep", text);
    c.sweep = landscape_grid();
    detail::read_axis(s, "x", c.sweep.x);
    detail::read_axis(s, "y", c.sweep.y);
    s.number("coupling_norm", c.sweep.coupling_norm);
    std::string closure(control_name(c.sweep.closure));
    s.string("closure", closure);
    c.sweep.closure = detail::control_or_fail(s, "sweep.closure", closure);
    s.number("degeneracy_tol", c.sweep.degeneracy_tol);
    s.finish();
  }
  if (const Json* v = r.find("optimize")) {
    detail::Reader o(*v, "optimize", text);
    if (const Json* f = o.find("free")) {
      if (!f->is_array()) o.error("optimize.free", "expected an array");
      for (std::size_t i = 0; i < f->size(); ++i) {
        detail::Reader fv((*f)[i], "optimize.free[" + std::to_string(i) + "]", text);
        FreeVariable var;
        fv.string("name", var.name);
        if (const Json* cs = fv.find("controls")) {
          if (!cs->is_array()) fv.error(fv.path("controls"), "expected an array of names");
          for (const auto& name : *cs) {
            if (!name.is_string()) fv.error(fv.path("controls"), "expected control names");
            var.controls.push_back(
                detail::control_or_fail(fv, fv.path("controls"), name.get<std::string>()));
          }
        }
        fv.number("lower", var.lower);
        fv.number("upper", var.upper);
        fv.finish();
        if (var.name.empty() && !var.controls.empty())
          var.name = std::string(control_name(var.controls.front()));
        c.optimize.free.push_back(std::move(var));
      }
    }
    std::string match(detail::to_string(c.optimize.match));
    o.string("match", match);
    if (match == "exact") c.optimize.match = MatchMode::kExact;
    else if (match == "equivalence") c.optimize.match = MatchMode::kEquivalence;
    else o.error("optimize.match", "expected 'exact' or 'equivalence'");
    std::string constraint(to_string(c.optimize.constraint));
    o.string("constraint", constraint);
    if (auto d = parse_degeneracy(constraint)) c.optimize.constraint = *d;
    else o.error("optimize.constraint", "expected 'none', 'single' or 'double'");
    o.number("coupling_norm", c.optimize.coupling_norm);
    o.number("distance_weight", c.optimize.distance_weight);
    o.number("purity_weight", c.optimize.purity_weight);
    o.number("penalty_weight", c.optimize.penalty_weight);
    o.integer("restarts", c.optimize.restarts);
    o.integer("max_evaluations", c.optimize.max_evaluations);
    o.number("threshold", c.optimize.threshold);
    o.finish();
  }
  if (const Json* v = r.find("sensitivity")) {
    detail::Reader s(*v, "sensitivity", text);
    s.number("budget", c.sensitivity.budget);
    s.number("step", c.sensitivity.step);
    s.finish();
  }
  if (const Json* v = r.find("device")) {
    detail::Reader d(*v, "device", text);
    d.number("delta_ghz", c.device.delta_ghz);
    d.number("j_ghz", c.device.j_ghz);
    d.number("t1_inverse_ghz", c.device.t1_inverse_ghz);
    d.number("temperature_k", c.device.temperature_k);
    d.number("cutoff", c.device.cutoff);
    d.finish();
  }
  r.number("degeneracy_tol", c.degeneracy_tol);
  if (!(c.degeneracy_tol > 0.0)) r.error("degeneracy_tol", "must be positive");
  r.integer("seed", c.seed);
  r.integer("threads", c.threads);
  if (const Json* v = r.find("output")) {
    detail::Reader o(*v, "output", text);
    o.string("dir", c.output.dir);
    o.string("prefix", c.output.prefix);
    o.finish();
  }
  r.finish();

  try {
    validate(c.params);
    validate(c.noise);
  } catch (const Error& e) {
    fail(ErrorKind::kConfig, e.what());
  }
  if (c.time.samples < 1) fail(ErrorKind::kConfig, "'time.samples' must be at least 1");
  if (c.time.dt < 0.0) fail(ErrorKind::kConfig, "'time.dt' must be non-negative");
  return c;
}

inline Json to_json(const HamiltonianParams& p) {
  Json j;
  for (Control k : {Control::kDelta1, Control::kDelta2, Control::kEps1, Control::kEps2,
                    Control::kJx, Control::kJy, Control::kJz, Control::kT0})
    j[std::string(control_name(k))] = p[k];
  return j;
}

inline Json to_json(const NoiseModel& n) {
  return Json{{"alpha", n.alpha},
              {"temperature", n.temperature},
              {"cutoff", n.cutoff},
              {"include_lamb_shift", n.include_lamb_shift}};
}

inline Json to_json(const Axis1D& a) {
  return Json{{"control", control_name(a.control)},
              {"min", a.min},
              {"max", a.max},
              {"points", a.points}};
}

inline Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

/// Fully resolved config; parse_run_config(dump) reproduces it. Thread count
/// and output location do not affect results and are left out unless asked.
inline Json to_json(const RunConfig& c, bool include_runtime = false) {
  Json j;
  j["experiment"] = c.experiment;
  j["command"] = c.command;
  j["construction"] = c.construction ? Json(*c.construction) : Json(nullptr);
  j["cnot_class"] = Json{{"j", c.cnot_class.j},
                         {"delta", c.cnot_class.delta},
                         {"signs", detail::to_string(c.cnot_class.signs)}};
  j["hamiltonian"] = to_json(c.params);
  j["noise"] = to_json(c.noise);
  j["target"] = c.target;
  j["protocol"] = c.protocol;
  j["amplitude_bound"] = optional_json(c.amplitude_bound);
  j["time"] = Json{{"t_final", optional_json(c.time.t_final)},
                   {"samples", c.time.samples},
                   {"dt", c.time.dt},
                   {"verify_halving", c.time.verify_halving}};
  j["sweep"] = Json{{"x", to_json(c.sweep.x)},
                    {"y", to_json(c.sweep.y)},
                    {"coupling_norm", optional_json(c.sweep.coupling_norm)},
                    {"closure", control_name(c.sweep.closure)},
                    {"degeneracy_tol", c.sweep.degeneracy_tol}};
  Json free = Json::array();
  for (const auto& v : c.optimize.free) {
    Json controls = Json::array();
    for (Control k : v.controls) controls.push_back(control_name(k));
    free.push_back(Json{{"name", v.name}, {"controls", controls}, {"lower", v.lower}, {"upper", v.upper}});
  }
  j["optimize"] = Json{{"free", free},
                       {"match", detail::to_string(c.optimize.match)},
                       {"constraint", to_string(c.optimize.constraint)},
                       {"coupling_norm", optional_json(c.optimize.coupling_norm)},
                       {"distance_weight", c.optimize.distance_weight},
                       {"purity_weight", c.optimize.purity_weight},
                       {"penalty_weight", c.optimize.penalty_weight},
                       {"restarts", c.optimize.restarts},
                       {"max_evaluations", c.optimize.max_evaluations},
                       {"threshold", c.optimize.threshold}};
  j["sensitivity"] = Json{{"budget", c.sensitivity.budget}, {"step", c.sensitivity.step}};
  j["device"] = Json{{"delta_ghz", c.device.delta_ghz},
                     {"j_ghz", c.device.j_ghz},
                     {"t1_inverse_ghz", c.device.t1_inverse_ghz},
                     {"temperature_k", c.device.temperature_k},
                     {"cutoff", c.device.cutoff}};
  j["degeneracy_tol"] = c.degeneracy_tol;
  j["seed"] = c.seed;
  if (include_runtime) {
    j["threads"] = c.threads;
    j["output"] = Json{{"dir", c.output.dir}, {"prefix", c.output.prefix}};
  }
  return j;
}

inline SearchSpec search_spec(const RunConfig& c) {
  SearchSpec s;
  s.free = c.optimize.free;
  s.base = c.params;
  s.target = target_gate(c.target);
  s.match = c.optimize.match;
  s.constraint = c.optimize.constraint;
  s.coupling_norm = c.optimize.coupling_norm;
  s.distance_weight = c.optimize.distance_weight;
  s.purity_weight = c.optimize.purity_weight;
  s.penalty_weight = c.optimize.penalty_weight;
  s.noise = c.noise;
  s.restarts = c.optimize.restarts;
  s.max_evaluations = c.optimize.max_evaluations;
  s.seed = c.seed;
  s.threads = c.threads;
  s.threshold = c.optimize.threshold;
  return s;
}

}  // namespace onestep
