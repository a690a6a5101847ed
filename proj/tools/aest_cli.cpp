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

// Command-line front end. Results go to CSV files and a short report on
// stdout; every diagnostic goes to stderr.
//
// Exit codes: 0 success, 1 argument or config error, 2 a run failed
// (partial sweep, numerical instability, target not achievable).

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "aest/harness/config.hpp"
#include "aest/harness/figures.hpp"
#include "aest/harness/scenario.hpp"

namespace {

using namespace aest;
using namespace aest::harness;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRunFailed = 2;

struct Overrides {
  std::optional<int> steps_per_half_period;
  std::optional<std::string> evolution;
  std::optional<std::string> norm;
  std::optional<unsigned> threads;

  void apply(SimConfig& cfg) const {
    if (steps_per_half_period) cfg.steps_per_half_period = *steps_per_half_period;
    if (evolution) cfg.evolution = parse_evolution(*evolution, "--evolution");
    if (norm) cfg.norm = parse_norm(*norm, "--norm");
  }
};

/// Reject configurations evolve() would refuse before any work starts.
void check_runnable(const SimConfig& cfg) {
  try {
    cfg.chain.validate();
    cfg.pulse.validate();
    if (cfg.evolution != Evolution::closed) (void)cfg.bath.validate();
    (void)resolve_grid(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Scenario load(const std::string& path, const Overrides& ov) {
  Scenario s = load_scenario(path);
  ov.apply(s.config);
  if (ov.threads) s.threads = *ov.threads;
  // Only the base is checked here: a bad sweep point is a partial failure.
  check_runnable(s.config);
  return s;
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_and_report(const Scenario& s, const std::string& out_dir) {
  const ScenarioResult r = run_scenario(s, out_dir);
  report_warnings(r.warnings);
  write_summary(std::cout, r.rows);
  for (const auto& f : r.failures) std::cerr << "error: " << f.message << '\n';
  for (const auto& f : r.files) std::cerr << "wrote " << f << '\n';
  return r.complete() ? kOk : kRunFailed;
}

int cmd_simulate(const std::string& path, const std::string& out_dir, const Overrides& ov) {
  Scenario s = load(path, ov);
  s.sweep.reset();
  return run_and_report(s, out_dir);
}

int cmd_sweep(const std::string& path, const std::string& out_dir, const Overrides& ov) {
  const Scenario s = load(path, ov);
  if (!s.sweep) std::cerr << "note: " << path << " has no [sweep]; running the base configuration\n";
  return run_and_report(s, out_dir);
}

int cmd_figure(const std::string& name, const std::string& out_dir, const Overrides& ov) {
  const Figure fig = parse_figure(name);
  FigureOptions opt;
  if (ov.steps_per_half_period) {
    if (*ov.steps_per_half_period < 1) throw ConfigError("--steps-per-half-period must be >= 1");
    opt.steps_per_half_period = *ov.steps_per_half_period;
  }
  if (ov.norm) opt.norm = parse_norm(*ov.norm, "--norm");
  if (ov.evolution) {
    std::cerr << "note: --evolution is ignored by 'figure'; each panel fixes its own evolution\n";
  }
  if (ov.threads) opt.threads = *ov.threads;
  const FigureResult r = emit_figure(fig, out_dir, opt);
  report_warnings(r.warnings);
  write_summary(std::cout, r.rows);
  for (const auto& f : r.failures) std::cerr << "error: " << f << '\n';
  for (const auto& f : r.files) std::cerr << "wrote " << f << '\n';
  return r.complete() ? kOk : kRunFailed;
}

int cmd_min_intensity(const std::string& path, double target, int m_max, bool lock_area,
                      const Overrides& ov) {
  const Scenario s = load(path, ov);
  if (s.sweep) std::cerr << "note: [sweep] is ignored by 'min-intensity'\n";
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("--target must lie in (0, 1)");
  try {
    const MinIntensityResult r = find_min_intensity(s.config, target, m_max, lock_area || s.lock_area);
    std::cout << "m," << r.m << '\n'
              << "I_min," << format_double(r.intensity) << '\n'
              << "tau," << format_double(r.half_period) << '\n'
              << "final_fidelity," << format_double(r.fidelity) << '\n'
              << "total_cost," << format_double(r.cost.total) << '\n';
    return kOk;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const NotAchievable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-chain quantum state transfer simulator with leakage-elimination control"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  app.add_option("--steps-per-half-period", ov.steps_per_half_period, "RK4 steps per pulse half-period");
  app.add_option("--evolution", ov.evolution, "non_markovian | lindblad_limit | closed")
      ->check(CLI::IsMember({"non_markovian", "lindblad_limit", "closed"}));
  app.add_option("--norm", ov.norm, "norm of d rho/dt for the speed limit: hs | operator")
      ->check(CLI::IsMember({"hs", "operator"}));
  app.add_option("--threads", ov.threads, "worker threads (0: available parallelism)");

  std::string config, out_dir = ".", figure;
  double target = 0.0;
  int m_max = 20;
  bool lock_area = false;

  auto* simulate = app.add_subcommand("simulate", "run the base configuration of a scenario");
  simulate->add_option("config", config, "scenario file")->required();
  simulate->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run every point of the scenario's [sweep]");
  sweep->add_option("config", config, "scenario file")->required();
  sweep->add_option("--out", out_dir, "output directory");

  auto* fig = app.add_subcommand("figure", "emit the data of one figure");
  fig->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  fig->add_option("--out", out_dir, "output directory")->required();

  auto* minint = app.add_subcommand("min-intensity", "smallest effective intensity reaching a fidelity");
  minint->add_option("config", config, "scenario file")->required();
  minint->add_option("--target", target, "fidelity target in (0, 1)")->required();
  minint->add_option("--m-max", m_max, "largest multiple of 2 pi / tau to try");
  minint->add_flag("--lock-area", lock_area, "keep I * tau fixed while scanning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config, out_dir, ov);
    if (*sweep) return cmd_sweep(config, out_dir, ov);
    if (*fig) return cmd_figure(figure, out_dir, ov);
    if (*minint) return cmd_min_intensity(config, target, m_max, lock_area, ov);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailed;
  }
  return kUsage;
}
