// Copyright 2026 The AEST Simulator Authors
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

// Scenario files: one `key = value` per line, `#` comments, and the sections
// [chain] [bath] [pulse] [run] [sweep]. Unknown sections or keys are errors.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aest/propagator.hpp"

namespace aest::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepParameter { Gamma, gamma, T, I };

inline std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Gamma: return "Gamma";
    case SweepParameter::gamma: return "gamma";
    case SweepParameter::T: return "T";
    case SweepParameter::I: return "I";
  }
  return "?";
}

struct Sweep {
  SweepParameter parameter = SweepParameter::Gamma;
  std::vector<double> values;
};

struct Scenario {
  std::string name = "scenario";
  SimConfig config;
  std::optional<Sweep> sweep;
  std::optional<double> fidelity_target;
  // Sweeping I keeps the pulse area I * tau fixed by adjusting tau.
  bool lock_area = false;
  // Pin the final fidelity to `fidelity_target` before measuring each point.
  bool pin_fidelity = false;
  unsigned threads = 0;  // 0: available parallelism

  void validate() const {
    if (sweep) {
      for (double v : sweep->values) {
        if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
        const bool positive_required =
            sweep->parameter == SweepParameter::gamma || sweep->parameter == SweepParameter::I;
        if (positive_required ? !(v > 0.0) : !(v >= 0.0)) {
          throw ConfigError("sweep value " + std::to_string(v) + " out of range for " +
                            std::string(to_string(sweep->parameter)));
        }
      }
    }
    if (fidelity_target && !(*fidelity_target > 0.0 && *fidelity_target <= 1.0)) {
      throw ConfigError("fidelity target must lie in (0, 1]");
    }
    if (pin_fidelity && !fidelity_target) {
      throw ConfigError("pin = fidelity requires run.fidelity_target");
    }
  }
};

/// Apply one swept value to a configuration.
inline SimConfig with_parameter(SimConfig cfg, SweepParameter p, double v, bool lock_area) {
  switch (p) {
    case SweepParameter::Gamma: cfg.bath.coupling = v; break;
    case SweepParameter::gamma: cfg.bath.memory_rate = v; break;
    case SweepParameter::T: cfg.bath.temperature = v; break;
    case SweepParameter::I:
      if (lock_area && cfg.pulse.intensity > 0.0) {
        cfg.pulse.half_period = cfg.pulse.intensity * cfg.pulse.half_period / v;
      }
      cfg.pulse.intensity = v;
      break;
  }
  return cfg;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ConfigError(where + ": expected a decimal number, got '" + text + "'");
  }
  return v;
}

inline int parse_int(const std::string& text, const std::string& where) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(where + ": expected an integer, got '" + text + "'");
  }
  return v;
}

inline bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(where + ": expected true or false, got '" + text + "'");
}

template <class E>
E parse_enum(const std::string& text, const std::string& where,
             std::initializer_list<std::pair<std::string_view, E>> options) {
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (text == name) return value;
    allowed += (allowed.empty() ? "" : "|") + std::string(name);
  }
  throw ConfigError(where + ": expected one of " + allowed + ", got '" + text + "'");
}

}  // namespace detail

inline Evolution parse_evolution(const std::string& s, const std::string& where = "evolution") {
  return detail::parse_enum<Evolution>(s, where,
                                       {{"non_markovian", Evolution::non_markovian},
                                        {"lindblad_limit", Evolution::lindblad_limit},
                                        {"closed", Evolution::closed}});
}

inline RhoDotNorm parse_norm(const std::string& s, const std::string& where = "norm") {
  return detail::parse_enum<RhoDotNorm>(
      s, where, {{"hs", RhoDotNorm::hilbert_schmidt}, {"operator", RhoDotNorm::operator_norm}});
}

inline std::string_view to_string(Evolution e) {
  switch (e) {
    case Evolution::non_markovian: return "non_markovian";
    case Evolution::lindblad_limit: return "lindblad_limit";
    case Evolution::closed: return "closed";
  }
  return "?";
}

inline std::string_view to_string(LindbladKind k) {
  switch (k) {
    case LindbladKind::sigma_minus: return "sigma_minus";
    case LindbladKind::sigma_x: return "sigma_x";
    case LindbladKind::sigma_z: return "sigma_z";
  }
  return "?";
}

/// Parse scenario text. `origin` is used in error messages.
inline Scenario parse_scenario(std::istream& in, const std::string& origin = "<config>") {
  Scenario sc;
  SimConfig& cfg = sc.config;
  std::string section;
  std::map<std::string, std::string> seen;
  std::optional<int> n_sites;
  std::string couplings = "uniform";
  std::optional<double> tau;
  std::optional<double> tau_pi_over;
  std::optional<std::string> sweep_param;
  std::optional<std::vector<double>> sweep_values;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = detail::trim(line);
    if (text.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + ": malformed section header");
      section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
      if (section != "chain" && section != "bath" && section != "pulse" && section != "run" &&
          section != "sweep") {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = detail::trim(std::string_view(text).substr(0, eq));
    const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
    if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any section");
    const std::string full = section + "." + key;
    if (!seen.emplace(full, value).second) throw ConfigError(where + ": duplicate key " + full);
    const std::string at = where + " (" + full + ")";

    if (full == "chain.sites") {
      n_sites = detail::parse_int(value, at);
    } else if (full == "chain.couplings") {
      if (value != "uniform" && value != "pst") {
        throw ConfigError(at + ": expected uniform|pst, got '" + value + "'");
      }
      couplings = value;
    } else if (full == "bath.Gamma") {
      cfg.bath.coupling = detail::parse_number(value, at);
    } else if (full == "bath.gamma") {
      cfg.bath.memory_rate = detail::parse_number(value, at);
    } else if (full == "bath.T") {
      cfg.bath.temperature = detail::parse_number(value, at);
    } else if (full == "bath.lindblad") {
      cfg.lindblad = detail::parse_enum<LindbladKind>(
          value, at,
          {{"sigma_minus", LindbladKind::sigma_minus},
           {"sigma_x", LindbladKind::sigma_x},
           {"sigma_z", LindbladKind::sigma_z}});
    } else if (full == "bath.coupling") {
      cfg.coupling = detail::parse_enum<CouplingMode>(
          value, at, {{"per_site", CouplingMode::per_site}, {"collective", CouplingMode::collective}});
    } else if (full == "pulse.shape") {
      cfg.pulse.shape = detail::parse_enum<PulseShape>(
          value, at,
          {{"none", PulseShape::none},
           {"rectangular", PulseShape::rectangular},
           {"sine", PulseShape::sine}});
    } else if (full == "pulse.I") {
      cfg.pulse.intensity = detail::parse_number(value, at);
    } else if (full == "pulse.tau") {
      tau = detail::parse_number(value, at);
    } else if (full == "pulse.tau_pi_over") {
      tau_pi_over = detail::parse_number(value, at);
    } else if (full == "pulse.lock_area") {
      sc.lock_area = detail::parse_bool(value, at);
    } else if (full == "run.name") {
      sc.name = value;
    } else if (full == "run.evolution") {
      cfg.evolution = parse_evolution(value, at);
    } else if (full == "run.total_time") {
      cfg.total_time = detail::parse_number(value, at);
    } else if (full == "run.steps_per_half_period") {
      cfg.steps_per_half_period = detail::parse_int(value, at);
    } else if (full == "run.free_steps") {
      cfg.free_steps = detail::parse_int(value, at);
    } else if (full == "run.norm") {
      cfg.norm = parse_norm(value, at);
    } else if (full == "run.obar_sees_control") {
      cfg.obar_sees_control = detail::parse_bool(value, at);
    } else if (full == "run.monitor_positivity") {
      cfg.monitor_positivity = detail::parse_bool(value, at);
    } else if (full == "run.fidelity_target") {
      sc.fidelity_target = detail::parse_number(value, at);
    } else if (full == "run.pin") {
      if (value != "none" && value != "fidelity") {
        throw ConfigError(at + ": expected none|fidelity, got '" + value + "'");
      }
      sc.pin_fidelity = value == "fidelity";
    } else if (full == "run.threads") {
      const int t = detail::parse_int(value, at);
      if (t < 0) throw ConfigError(at + ": threads must be >= 0");
      sc.threads = static_cast<unsigned>(t);
    } else if (full == "sweep.parameter") {
      sweep_param = value;
    } else if (full == "sweep.values") {
      std::vector<double> vals;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::string v = detail::trim(item);
        if (v.empty()) continue;
        vals.push_back(detail::parse_number(v, at));
      }
      sweep_values = std::move(vals);
    } else {
      throw ConfigError(where + ": unknown key " + full);
    }
  }

  if (!n_sites) throw ConfigError(origin + ": missing chain.sites");
  cfg.chain = couplings == "pst" ? pst_couplings(*n_sites) : uniform_couplings(*n_sites);
  if (tau && tau_pi_over) throw ConfigError(origin + ": give pulse.tau or pulse.tau_pi_over, not both");
  if (tau) cfg.pulse.half_period = *tau;
  if (tau_pi_over) {
    if (!(*tau_pi_over > 0.0)) throw ConfigError(origin + ": pulse.tau_pi_over must be > 0");
    cfg.pulse.half_period = std::numbers::pi / *tau_pi_over;
  }
  if (sweep_param || sweep_values) {
    if (!sweep_param || !sweep_values) {
      throw ConfigError(origin + ": [sweep] needs both parameter and values");
    }
    Sweep sw;
    sw.parameter = detail::parse_enum<SweepParameter>(*sweep_param, origin + " (sweep.parameter)",
                                                      {{"Gamma", SweepParameter::Gamma},
                                                       {"gamma", SweepParameter::gamma},
                                                       {"T", SweepParameter::T},
                                                       {"I", SweepParameter::I}});
    sw.values = *sweep_values;
    sc.sweep = std::move(sw);
  }
  try {
    cfg.pulse.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  sc.validate();
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<text>") {
  std::istringstream in(text);
  return parse_scenario(in, origin);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_scenario(in, path);
}

}  // namespace aest::harness
