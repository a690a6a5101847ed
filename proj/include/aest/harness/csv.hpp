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

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aest/trajectory.hpp"

namespace aest::harness {

/// 17 significant digits: round-trips every double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short form used in file names.
inline std::string format_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols = {"t",  "t/T_tot", "F",
                                                "c",  "dC/dt",   "hs_norm_rho_dot"};
  return cols;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out << ',';
    out << cells[k];
  }
  out << '\n';
}

/// One row per grid point of the trajectory.
inline void write_timeseries(std::ostream& out, const Trajectory& traj) {
  write_row(out, timeseries_columns());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    write_row(out, {format_double(traj.times[k]), format_double(traj.times[k] / traj.total_time),
                    format_double(traj.fidelity[k]), format_double(traj.control_value[k]),
                    format_double(traj.instantaneous_cost[k]),
                    format_double(traj.rho_dot_norm[k])});
  }
}

inline void write_file(const std::string& path, const auto& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  writer(out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

/// Figure panel in long format: one row per (curve, grid point) with the
/// columns curve, t, t/T_tot, <quantity>. Curves may use different grids.
struct Panel {
  std::string quantity = "F";
  double total_time = 1.0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> times;
  std::vector<std::vector<double>> values;

  void add(const std::string& name, const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("panel curve '" + name + "' size mismatch");
    names.push_back(name);
    times.push_back(t);
    values.push_back(y);
  }

  std::size_t rows() const {
    std::size_t n = 0;
    for (const auto& t : times) n += t.size();
    return n;
  }

  void write(std::ostream& out) const {
    write_row(out, {"curve", "t", "t/T_tot", quantity});
    for (std::size_t c = 0; c < names.size(); ++c) {
      for (std::size_t k = 0; k < times[c].size(); ++k) {
        write_row(out, {names[c], format_double(times[c][k]),
                        format_double(times[c][k] / total_time), format_double(values[c][k])});
      }
    }
  }
};

}  // namespace aest::harness
