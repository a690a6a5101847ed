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

// Preset scenario bundles for the four figures. Every panel is written as a
// long-format CSV (see Panel); each figure also gets a summary CSV with one
// ResultRow per curve.

#pragma once

#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "aest/harness/scenario.hpp"

namespace aest::harness {

enum class Figure { fig1, fig2, fig3, fig4 };

inline std::string_view to_string(Figure f) {
  switch (f) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
  }
  return "?";
}

inline Figure parse_figure(const std::string& s) {
  return detail::parse_enum<Figure>(
      s, "figure",
      {{"fig1", Figure::fig1}, {"fig2", Figure::fig2}, {"fig3", Figure::fig3}, {"fig4", Figure::fig4}});
}

struct FigureOptions {
  unsigned threads = 0;
  int steps_per_half_period = 64;
  RhoDotNorm norm = RhoDotNorm::hilbert_schmidt;
  PinOptions pin;
};

/// How the pulse of one curve is chosen.
enum class CurveMode { direct, pinned, min_intensity };

/// One curve of one panel.
struct FigureRun {
  std::string panel;     // e.g. "fig1a"
  std::string curve;     // label inside the panel CSV
  std::string scenario;  // summary row label, e.g. "fig1a" or "fig1a_free"
  std::string parameter;
  double value = 0.0;
  SimConfig config;
  CurveMode mode = CurveMode::direct;
  double target = 0.0;  // fidelity target for pinned and min_intensity curves
};

struct FigureResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::vector<std::string> files;

  bool complete() const { return failures.empty(); }
};

namespace presets {

inline constexpr double kPi = std::numbers::pi;

inline SimConfig fig1_base() {
  SimConfig c;
  c.chain = uniform_couplings(7);
  c.lindblad = LindbladKind::sigma_minus;
  c.pulse = {PulseShape::sine, 76.96, kPi / 32};
  return c;
}

inline SimConfig fig2_base() {
  SimConfig c;
  c.chain = uniform_couplings(6);
  c.bath = {0.03, 1.0, 30.0};
  c.lindblad = LindbladKind::sigma_x;
  c.pulse = {PulseShape::rectangular, 32.0, kPi / 16};
  return c;
}

inline SimConfig fig3_base(double coupling, double memory_rate, double temperature) {
  SimConfig c = fig2_base();
  c.bath = {coupling, memory_rate, temperature};
  return c;
}

inline SimConfig fig4_base(double coupling, double memory_rate, double temperature) {
  SimConfig c;
  c.chain = uniform_couplings(5);
  c.bath = {coupling, memory_rate, temperature};
  c.lindblad = LindbladKind::sigma_x;
  c.pulse = {PulseShape::rectangular, 32.0, kPi / 16};
  return c;
}

inline std::string label(const std::string& name, double v) { return name + "=" + format_label(v); }

inline void add_direct_and_free(std::vector<FigureRun>& runs, const std::string& panel,
                                const std::string& param, double value, const SimConfig& cfg) {
  runs.push_back({panel, label(param, value), panel, param, value, cfg});
  SimConfig free_cfg = cfg;
  free_cfg.pulse = {};
  runs.push_back({panel, "free " + label(param, value), panel + "_free", param, value, free_cfg});
}

inline std::vector<FigureRun> fig1() {
  std::vector<FigureRun> runs;
  for (double g : {0.02, 0.04, 0.06}) {
    SimConfig c = fig1_base();
    c.bath = {g, 2.0, 40.0};
    add_direct_and_free(runs, "fig1a", "Gamma", g, c);
  }
  for (double g : {0.5, 1.0, 2.0, 5.0}) {
    SimConfig c = fig1_base();
    c.bath = {0.04, g, 50.0};
    add_direct_and_free(runs, "fig1b", "gamma", g, c);
  }
  {
    // Markov limit of the same bath: the control has no lever on the bath terms.
    SimConfig c = fig1_base();
    c.bath = {0.04, 5.0, 50.0};
    c.evolution = Evolution::lindblad_limit;
    runs.push_back({"fig1b", "lindblad", "fig1b_lindblad", "gamma", 5.0, c});
    c.pulse = {};
    runs.push_back({"fig1b", "free lindblad", "fig1b_lindblad_free", "gamma", 5.0, c});
  }
  for (double t : {50.0, 100.0, 150.0}) {
    SimConfig c = fig1_base();
    c.bath = {0.02, 2.0, t};
    add_direct_and_free(runs, "fig1c", "T", t, c);
  }
  return runs;
}

inline std::vector<FigureRun> fig2() {
  std::vector<FigureRun> runs;
  for (double i : {32.0, 64.0, 112.0, 128.0}) {
    const SimConfig c = with_parameter(fig2_base(), SweepParameter::I, i, true);
    runs.push_back({"fig2a", label("I", i), "fig2a", "I", i, c});
  }
  const std::pair<LindbladKind, const char*> kinds[] = {{LindbladKind::sigma_z, "sigma_z"},
                                                         {LindbladKind::sigma_minus, "sigma_minus"},
                                                         {LindbladKind::sigma_x, "sigma_x"}};
  // Minimum intensity per operator along I * tau = 2 pi, in steps of 16.
  double index = 0.0;
  for (const auto& [kind, name] : kinds) {
    SimConfig c = fig2_base();
    c.lindblad = kind;
    c.pulse = {PulseShape::rectangular, 16.0, kPi / 8};
    runs.push_back({"fig2c", std::string("L=") + name, std::string("fig2c_") + name, "L", index++, c,
                    CurveMode::min_intensity, 0.999});
  }
  return runs;
}

inline std::vector<FigureRun> fig3() {
  std::vector<FigureRun> runs;
  auto pinned = [&](const std::string& panel, const std::string& param, double v, SimConfig c) {
    runs.push_back({panel, label(param, v), panel, param, v, std::move(c), CurveMode::pinned, 0.996});
  };
  for (double g : {0.01, 0.02, 0.03}) pinned("fig3a", "Gamma", g, fig3_base(g, 2.0, 30.0));
  for (double g : {0.5, 1.0, 2.0}) pinned("fig3b", "gamma", g, fig3_base(0.02, g, 40.0));
  for (double t : {20.0, 30.0, 40.0}) pinned("fig3c", "T", t, fig3_base(0.03, 1.0, t));
  return runs;
}

inline const std::vector<double>& fig4_gammas() {
  static const std::vector<double> g = {0.5, 1.0, 2.0, 5.0};
  return g;
}

inline std::vector<FigureRun> fig4() {
  std::vector<FigureRun> runs;
  for (double big : {0.01, 0.03, 0.05}) {
    for (double g : fig4_gammas()) {
      runs.push_back({"fig4a", label("Gamma", big), "fig4a_" + label("Gamma", big), "gamma", g,
                      fig4_base(big, g, 40.0), CurveMode::pinned, 0.999});
    }
  }
  for (double t : {10.0, 40.0, 100.0}) {
    for (double g : fig4_gammas()) {
      runs.push_back({"fig4b", label("T", t), "fig4b_" + label("T", t), "gamma", g,
                      fig4_base(0.03, g, t), CurveMode::pinned, 0.999});
    }
  }
  return runs;
}

}  // namespace presets

inline std::vector<FigureRun> figure_runs(Figure f) {
  switch (f) {
    case Figure::fig1: return presets::fig1();
    case Figure::fig2: return presets::fig2();
    case Figure::fig3: return presets::fig3();
    case Figure::fig4: return presets::fig4();
  }
  return {};
}

/// Evolve one figure curve according to its mode.
inline PointResult run_figure_curve(const FigureRun& run, const FigureOptions& opt) {
  SimConfig cfg = run.config;
  cfg.steps_per_half_period = opt.steps_per_half_period;
  cfg.norm = opt.norm;
  switch (run.mode) {
    case CurveMode::direct: return run_point(run.scenario, run.parameter, run.value, cfg, {});
    case CurveMode::pinned:
      return run_point(run.scenario, run.parameter, run.value, cfg, run.target, opt.pin);
    case CurveMode::min_intensity: {
      const MinIntensityResult m = find_min_intensity(cfg, run.target, 20, true);
      cfg.pulse.intensity = m.intensity;
      cfg.pulse.half_period = m.half_period;
      PointResult p = run_point(run.scenario, run.parameter, run.value, cfg, {});
      p.row.method = "min_intensity";
      p.row.evaluations = m.m + 1;
      return p;
    }
  }
  throw std::logic_error("unknown curve mode");
}

namespace detail {

/// tau_QSL and friends against gamma, one row per pinned point.
inline void write_qslt_table(std::ostream& out, const std::vector<const FigureRun*>& runs,
                             const std::vector<const ResultRow*>& rows) {
  write_row(out, {"curve", "gamma", "tau_qsl", "lambda_t", "bures_angle", "final_fidelity",
                  "intensity", "half_period", "method"});
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const ResultRow& r = *rows[k];
    write_row(out, {runs[k]->curve, format_double(r.value), format_double(r.tau_qsl),
                    format_double(r.lambda_t), format_double(r.bures_angle),
                    format_double(r.final_fidelity), format_double(r.intensity),
                    format_double(r.half_period), r.method});
  }
}

}  // namespace detail

/// Run `runs` and write them out with the panel layout of `fig`. Curves that
/// fail are reported in `failures`; their panels are written without them.
inline FigureResult emit_figure_runs(Figure fig, const std::vector<FigureRun>& runs,
                                     const std::string& out_dir, const FigureOptions& opt = {}) {
  std::vector<std::optional<PointResult>> results(runs.size());
  std::vector<std::string> errors(runs.size());
  parallel_for(runs.size(), opt.threads, [&](std::size_t k) {
    try {
      results[k] = run_figure_curve(runs[k], opt);
    } catch (const std::exception& e) {
      errors[k] = runs[k].panel + " " + runs[k].curve + " (" + runs[k].parameter + "=" +
                  format_label(runs[k].value) + "): " + e.what();
    }
  });

  FigureResult out;
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> panel_order;
  std::map<std::string, std::vector<std::size_t>> by_panel;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (!results[k]) {
      out.failures.push_back(errors[k]);
      continue;
    }
    for (const auto& w : results[k]->trajectory.warnings) out.warnings.push_back(w);
    out.rows.push_back(results[k]->row);
    if (!by_panel.count(runs[k].panel)) panel_order.push_back(runs[k].panel);
    by_panel[runs[k].panel].push_back(k);
  }

  auto emit_panel = [&](const std::string& source, const std::string& name,
                        const std::string& quantity, auto series) {
    Panel p;
    p.quantity = quantity;
    for (std::size_t k : by_panel[source]) {
      const Trajectory& tr = results[k]->trajectory;
      p.total_time = tr.total_time;
      p.add(runs[k].curve, tr.times, series(tr));
    }
    const std::string path = (dir / (name + ".csv")).string();
    write_file(path, [&](std::ostream& os) { p.write(os); });
    out.files.push_back(path);
  };
  using Series = const std::vector<double>&;
  auto fidelity_of = [](const Trajectory& tr) -> Series { return tr.fidelity; };
  auto cost_of = [](const Trajectory& tr) -> Series { return tr.instantaneous_cost; };
  auto control_of = [](const Trajectory& tr) -> Series { return tr.control_value; };

  for (const std::string& panel : panel_order) {
    if (fig == Figure::fig1) {
      emit_panel(panel, panel, "F", fidelity_of);
    } else if (fig == Figure::fig2) {
      if (panel == "fig2a") {
        emit_panel(panel, "fig2a", "F", fidelity_of);
        emit_panel(panel, "fig2b", "dC/dt", cost_of);
      } else {
        emit_panel(panel, "fig2c", "dC/dt", cost_of);
        emit_panel(panel, "fig2c_inset", "c", control_of);
      }
    } else if (fig == Figure::fig3) {
      emit_panel(panel, panel, "dC/dt", cost_of);
    } else {
      std::vector<const FigureRun*> rs;
      std::vector<const ResultRow*> rows;
      for (std::size_t k : by_panel[panel]) {
        rs.push_back(&runs[k]);
        rows.push_back(&results[k]->row);
      }
      const std::string path = (dir / (panel + ".csv")).string();
      write_file(path, [&](std::ostream& os) { detail::write_qslt_table(os, rs, rows); });
      out.files.push_back(path);
    }
  }

  const std::string stem(to_string(fig));
  const std::string summary = (dir / (stem + "_summary.csv")).string();
  write_file(summary, [&](std::ostream& os) { write_summary(os, out.rows); });
  const std::string timing = (dir / (stem + "_timing.csv")).string();
  write_file(timing, [&](std::ostream& os) { write_timing(os, out.rows); });
  out.files.push_back(summary);
  out.files.push_back(timing);
  return out;
}

/// Run the preset bundle of a figure and write its panel CSVs into `out_dir`.
inline FigureResult emit_figure(Figure fig, const std::string& out_dir,
                                const FigureOptions& opt = {}) {
  return emit_figure_runs(fig, figure_runs(fig), out_dir, opt);
}

}  // namespace aest::harness
