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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "aest/harness/config.hpp"
#include "aest/harness/csv.hpp"
#include "aest/metrics.hpp"
#include "aest/propagator.hpp"

namespace aest::harness {

class PinningFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAchievable : public std::runtime_error {
 public:
  NotAchievable(const std::string& what, double best_fidelity, double best_intensity)
      : std::runtime_error(what), best_fidelity_(best_fidelity), best_intensity_(best_intensity) {}
  double best_fidelity() const { return best_fidelity_; }
  double best_intensity() const { return best_intensity_; }

 private:
  double best_fidelity_;
  double best_intensity_;
};

// ---------------------------------------------------------------------------
// Fidelity pinning
// ---------------------------------------------------------------------------

struct PinOptions {
  double tolerance = 5e-4;
  int max_evaluations = 40;
  int max_segments = 512;  // upper end of the tau = T_tot / n ladder
};

struct PinResult {
  SimConfig config;
  Trajectory trajectory;
  double fidelity = 0.0;
  int evaluations = 0;
  std::string method;  // free | effective | continuous
  double effectiveness_residual = 0.0;
};

/// Adjust a rectangular pulse until F(T_tot) = target within tolerance.
///
/// The half-period is taken from the ladder tau_n = T_tot / n, on which the
/// effective intensity I_n = 2 pi / tau_n satisfies I tau = 2 pi. The smallest
/// n whose effective pulse reaches the target is located first; the intensity
/// is then lowered continuously at that tau (regula falsi between I = 0 and
/// I_n), accepting a non-zero effectiveness residual.
inline PinResult pin_fidelity(const SimConfig& base, double target, const PinOptions& opt = {}) {
  if (base.pulse.shape != PulseShape::rectangular) {
    throw std::invalid_argument("fidelity pinning needs a rectangular pulse");
  }
  if (!(target > 0.0 && target <= 1.0)) throw std::invalid_argument("target must be in (0, 1]");
  const double t_tot = base.total_time;

  int evaluations = 0;
  // A run that leaves the weak-coupling regime counts as falling short of
  // the target; nullopt marks it.
  auto run = [&](const SimConfig& cfg) -> std::optional<Trajectory> {
    if (evaluations >= opt.max_evaluations) {
      throw PinningFailed("fidelity pinning to " + std::to_string(target) + " did not converge in " +
                          std::to_string(opt.max_evaluations) + " evaluations");
    }
    ++evaluations;
    try {
      return evolve(cfg);
    } catch (const NumericalInstability&) {
      return std::nullopt;
    }
  };
  auto finish = [&](SimConfig cfg, Trajectory traj, std::string method) {
    PinResult r;
    r.fidelity = traj.final_fidelity();
    r.effectiveness_residual =
        cfg.pulse.shape == PulseShape::none ? 0.0 : check_effective(cfg.pulse).residual;
    r.config = std::move(cfg);
    r.trajectory = std::move(traj);
    r.evaluations = evaluations;
    r.method = std::move(method);
    return r;
  };

  SimConfig free_cfg = base;
  free_cfg.pulse = {PulseShape::none, 0.0, 0.0};
  std::optional<Trajectory> free_traj = run(free_cfg);
  std::optional<double> f_free;
  if (free_traj) {
    f_free = free_traj->final_fidelity();
    if (std::abs(*f_free - target) <= opt.tolerance) {
      return finish(free_cfg, std::move(*free_traj), "free");
    }
    if (*f_free > target) {
      throw PinningFailed("free evolution already exceeds the target fidelity (" +
                          std::to_string(*f_free) + ")");
    }
  }

  auto effective_cfg = [&](int n) {
    SimConfig cfg = base;
    cfg.pulse.half_period = t_tot / n;
    cfg.pulse.intensity = 2.0 * std::numbers::pi * n / t_tot;
    return cfg;
  };
  std::map<int, std::pair<double, std::optional<Trajectory>>> ladder;
  auto ladder_eval = [&](int n) -> double {
    auto it = ladder.find(n);
    if (it == ladder.end()) {
      std::optional<Trajectory> tr = run(effective_cfg(n));
      const double f = tr ? tr->final_fidelity() : -1.0;
      it = ladder.emplace(n, std::make_pair(f, std::move(tr))).first;
    }
    return it->second.first;
  };
  auto reaches = [&](int n) { return ladder_eval(n) >= target - opt.tolerance; };

  const int n0 = std::max(1, static_cast<int>(std::lround(t_tot / base.pulse.half_period)));
  int lo = 0;  // n = 0 stands for free evolution, known to fall short
  int hi = n0;
  if (!reaches(n0)) {
    lo = n0;
    hi = 2 * n0;
    while (!reaches(hi)) {
      lo = hi;
      if (hi >= opt.max_segments) {
        throw PinningFailed("target fidelity " + std::to_string(target) +
                            " not reached with effective pulses up to tau = T_tot/" +
                            std::to_string(hi) + " (F = " + std::to_string(ladder_eval(hi)) + ")");
      }
      hi = std::min(2 * hi, opt.max_segments);
    }
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  const double f_hi = ladder_eval(hi);
  if (std::abs(f_hi - target) <= opt.tolerance) {
    return finish(effective_cfg(hi), std::move(*ladder.at(hi).second), "effective");
  }

  // Illinois regula falsi on I in [0, I_hi] at tau_hi; plain bisection while
  // the lower end has no usable fidelity.
  SimConfig cfg = effective_cfg(hi);
  double a = 0.0;
  std::optional<double> fa;
  if (f_free) fa = *f_free - target;
  double b = cfg.pulse.intensity, fb = f_hi - target;
  while (true) {
    const double c = (fa && fb != *fa) ? b - fb * (b - a) / (fb - *fa) : 0.5 * (a + b);
    cfg.pulse.intensity = c;
    std::optional<Trajectory> tr = run(cfg);
    if (!tr) {
      a = c;
      fa.reset();
      continue;
    }
    const double fc = tr->final_fidelity() - target;
    if (std::abs(fc) <= opt.tolerance) return finish(cfg, std::move(*tr), "continuous");
    if (fc * fb < 0.0) {
      a = b;
      fa = fb;
    } else if (fa) {
      *fa *= 0.5;
    }
    b = c;
    fb = fc;
  }
}

// ---------------------------------------------------------------------------
// Minimum effective intensity
// ---------------------------------------------------------------------------

struct MinIntensityResult {
  double intensity = 0.0;
  double half_period = 0.0;
  int m = 0;
  double fidelity = 0.0;
  CostReport cost;
  std::vector<std::pair<double, double>> scanned;  // (I, F) in scan order
};

/// Scan I_m = 2 pi m / tau for m = 1..m_max and return the first intensity
/// whose final fidelity reaches the target. With `lock_area` the pulse area
/// I * tau of `base` is kept, so each I_m runs with half-period area / I_m.
inline MinIntensityResult find_min_intensity(const SimConfig& base, double target, int m_max = 20,
                                             bool lock_area = false) {
  if (base.pulse.shape != PulseShape::rectangular) {
    throw std::invalid_argument("minimum-intensity search needs a rectangular pulse");
  }
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target must be in (0, 1)");
  if (!(base.pulse.half_period > 0.0)) throw std::invalid_argument("pulse half-period must be > 0");
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  const double area = base.pulse.intensity * base.pulse.half_period;
  if (lock_area && !(area > 0.0)) throw std::invalid_argument("lock_area needs a positive base intensity");
  MinIntensityResult r;
  double best_f = -1.0, best_i = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    SimConfig cfg = base;
    cfg.pulse.intensity = 2.0 * std::numbers::pi * m / base.pulse.half_period;
    if (lock_area) cfg.pulse.half_period = area / cfg.pulse.intensity;
    const Trajectory tr = evolve(cfg);
    const double f = tr.final_fidelity();
    r.scanned.emplace_back(cfg.pulse.intensity, f);
    if (f > best_f) {
      best_f = f;
      best_i = cfg.pulse.intensity;
    }
    if (f >= target) {
      r.intensity = cfg.pulse.intensity;
      r.half_period = cfg.pulse.half_period;
      r.m = m;
      r.fidelity = f;
      r.cost = total_cost(tr);
      return r;
    }
  }
  throw NotAchievable("no effective intensity with m <= " + std::to_string(m_max) +
                          " reaches F = " + std::to_string(target) + "; best F = " +
                          std::to_string(best_f) + " at I = " + std::to_string(best_i),
                      best_f, best_i);
}

// ---------------------------------------------------------------------------
// Scenario runs and sweeps
// ---------------------------------------------------------------------------

struct ResultRow {
  std::string scenario;
  std::string parameter;  // swept parameter, or "base"
  double value = 0.0;
  double final_fidelity = 0.0;
  double total_cost = 0.0;
  double tau_qsl = 0.0;
  double lambda_t = 0.0;
  double bures_angle = 0.0;
  double intensity = 0.0;
  double half_period = 0.0;
  double effectiveness_residual = 0.0;
  std::string method = "direct";  // direct | free | effective | continuous
  int evaluations = 1;
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double wall_time = 0.0;  // seconds; excluded from the summary CSV
};

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "scenario", "parameter",  "value",      "final_fidelity", "total_cost",
      "tau_qsl",  "lambda_t",   "bures_angle", "intensity",     "half_period",
      "effectiveness_residual", "method",     "evaluations",    "min_eigenvalue"};
  return cols;
}

inline void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  write_row(out, summary_columns());
  for (const auto& r : rows) {
    write_row(out, {r.scenario, r.parameter, format_double(r.value), format_double(r.final_fidelity),
                    format_double(r.total_cost), format_double(r.tau_qsl),
                    format_double(r.lambda_t), format_double(r.bures_angle),
                    format_double(r.intensity), format_double(r.half_period),
                    format_double(r.effectiveness_residual), r.method,
                    std::to_string(r.evaluations), format_double(r.min_eigenvalue)});
  }
}

inline void write_timing(std::ostream& out, const std::vector<ResultRow>& rows) {
  write_row(out, {"scenario", "parameter", "value", "wall_time_s"});
  for (const auto& r : rows) {
    write_row(out, {r.scenario, r.parameter, format_double(r.value), format_double(r.wall_time)});
  }
}

struct PointResult {
  ResultRow row;
  Trajectory trajectory;
  SimConfig config;  // configuration actually run (after pinning)
};

/// Evolve one configuration (pinning first when requested) and measure it.
inline PointResult run_point(const std::string& name, const std::string& parameter, double value,
                             const SimConfig& cfg, std::optional<double> pin_target,
                             const PinOptions& pin_opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  PointResult p;
  p.row.scenario = name;
  p.row.parameter = parameter;
  p.row.value = value;
  if (pin_target) {
    PinResult pin = pin_fidelity(cfg, *pin_target, pin_opt);
    p.trajectory = std::move(pin.trajectory);
    p.config = std::move(pin.config);
    p.row.method = pin.method;
    p.row.evaluations = pin.evaluations;
  } else {
    p.config = cfg;
    p.trajectory = evolve(cfg);
  }
  const Trajectory& tr = p.trajectory;
  p.row.final_fidelity = tr.final_fidelity();
  p.row.total_cost = total_cost(tr).total;
  const QsltReport q = qslt(tr, tr.psi0);
  p.row.tau_qsl = q.tau_qsl;
  p.row.lambda_t = q.lambda_t;
  p.row.bures_angle = q.bures_angle;
  p.row.intensity = p.config.pulse.intensity;
  p.row.half_period = p.config.pulse.half_period;
  p.row.effectiveness_residual = p.config.pulse.shape == PulseShape::none
                                     ? 0.0
                                     : check_effective(p.config.pulse).residual;
  p.row.min_eigenvalue = tr.min_eigenvalue_overall;
  p.row.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return p;
}

/// Run `jobs` tasks on `width` worker threads (0: available parallelism).
inline void parallel_for(std::size_t jobs, unsigned width, const std::function<void(std::size_t)>& fn) {
  if (width == 0) width = std::max(1u, std::thread::hardware_concurrency());
  width = static_cast<unsigned>(std::min<std::size_t>(width, std::max<std::size_t>(jobs, 1)));
  if (width <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < width; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < jobs; k = next++) fn(k);
    });
  }
  for (auto& t : pool) t.join();
}

struct SweepFailure {
  double value = 0.0;
  std::string message;
};

struct ScenarioResult {
  std::vector<ResultRow> rows;  // sorted by swept value
  std::vector<SweepFailure> failures;
  std::vector<std::string> warnings;
  std::vector<std::string> files;

  bool complete() const { return failures.empty(); }
};

inline std::string timeseries_filename(const Scenario& s, std::optional<double> value) {
  if (!s.sweep || !value) return s.name + ".csv";
  return s.name + "_" + std::string(to_string(s.sweep->parameter)) + "_" + format_label(*value) +
         ".csv";
}

/// Execute every sweep point (or the base configuration when there is no
/// sweep) and, when `out_dir` is given, write one time-series CSV per run
/// plus `<name>_summary.csv` and `<name>_timing.csv`.
inline ScenarioResult run_scenario(const Scenario& s, const std::optional<std::string>& out_dir = {},
                                   const PinOptions& pin_opt = {}) {
  s.validate();
  std::vector<std::optional<double>> points;
  if (s.sweep && !s.sweep->values.empty()) {
    for (double v : s.sweep->values) points.emplace_back(v);
  } else {
    points.emplace_back(std::nullopt);
  }
  const std::string param = (s.sweep && !s.sweep->values.empty())
                                ? std::string(to_string(s.sweep->parameter))
                                : std::string("base");
  std::optional<double> pin_target;
  if (s.pin_fidelity) pin_target = s.fidelity_target;

  std::vector<std::optional<PointResult>> results(points.size());
  std::vector<std::string> errors(points.size());
  parallel_for(points.size(), s.threads, [&](std::size_t k) {
    try {
      SimConfig cfg = s.config;
      double value = 0.0;
      if (points[k]) {
        value = *points[k];
        cfg = with_parameter(cfg, s.sweep->parameter, value, s.lock_area);
      }
      results[k] = run_point(s.name, param, value, cfg, pin_target, pin_opt);
    } catch (const std::exception& e) {
      errors[k] = e.what();
      if (errors[k].empty()) errors[k] = "unknown error";
    }
  });

  ScenarioResult out;
  if (out_dir) std::filesystem::create_directories(*out_dir);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!results[k]) {
      out.failures.push_back({points[k].value_or(0.0),
                              s.name + " " + param + "=" + format_label(points[k].value_or(0.0)) +
                                  ": " + errors[k]});
      continue;
    }
    for (const auto& w : results[k]->trajectory.warnings) out.warnings.push_back(w);
    if (out_dir) {
      const std::string path =
          (std::filesystem::path(*out_dir) / timeseries_filename(s, points[k])).string();
      write_file(path, [&](std::ostream& os) { write_timeseries(os, results[k]->trajectory); });
      out.files.push_back(path);
    }
    out.rows.push_back(results[k]->row);
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.value < b.value; });
  if (out_dir) {
    const auto dir = std::filesystem::path(*out_dir);
    const std::string summary = (dir / (s.name + "_summary.csv")).string();
    write_file(summary, [&](std::ostream& os) { write_summary(os, out.rows); });
    const std::string timing = (dir / (s.name + "_timing.csv")).string();
    write_file(timing, [&](std::ostream& os) { write_timing(os, out.rows); });
    out.files.push_back(summary);
    out.files.push_back(timing);
  }
  return out;
}

}  // namespace aest::harness
