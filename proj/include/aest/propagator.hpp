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

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aest/bath.hpp"
#include "aest/control.hpp"
#include "aest/metrics.hpp"
#include "aest/operators.hpp"
#include "aest/trajectory.hpp"

namespace aest {

enum class Evolution { non_markovian, lindblad_limit, closed };

class NumericalInstability : public std::runtime_error {
 public:
  NumericalInstability(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct SimConfig {
  ChainSpec chain = uniform_couplings(7);
  BathParams bath;
  LindbladKind lindblad = LindbladKind::sigma_minus;
  CouplingMode coupling = CouplingMode::per_site;
  PulseSpec pulse;
  double total_time = std::numbers::pi / 4.0;
  int steps_per_half_period = 64;
  // Step count when no pulse is applied; defaults to 128 * ceil(4 T_tot / pi).
  std::optional<int> free_steps;
  Evolution evolution = Evolution::non_markovian;
  RhoDotNorm norm = RhoDotNorm::hilbert_schmidt;
  // Include H_LEO(t) in the commutator of the O-bar equations.
  bool obar_sees_control = true;
  bool monitor_positivity = true;
  std::size_t max_stored_samples = 2048;
  double trace_guard = 1e-6;
  double hermiticity_guard = 1e-8;
};

struct StepGrid {
  int n_steps = 0;
  double step = 0.0;
  int steps_per_segment = 0;  // 0 when there are no pulse segments
};

inline StepGrid resolve_grid(const SimConfig& cfg) {
  if (!(cfg.total_time > 0.0) || !std::isfinite(cfg.total_time)) {
    throw std::invalid_argument("total time must be finite and > 0");
  }
  StepGrid g;
  if (cfg.pulse.shape == PulseShape::none) {
    int n = 0;
    if (cfg.free_steps) {
      n = *cfg.free_steps;
    } else {
      n = 128 * static_cast<int>(std::ceil(4.0 * cfg.total_time / std::numbers::pi - 1e-12));
    }
    if (n < 1) throw std::invalid_argument("step count must be >= 1");
    g.n_steps = n;
    g.step = cfg.total_time / n;
    return g;
  }
  if (cfg.steps_per_half_period < 1) {
    throw std::invalid_argument("steps per half-period must be >= 1");
  }
  g.steps_per_segment = cfg.steps_per_half_period;
  g.step = cfg.pulse.half_period / cfg.steps_per_half_period;
  const double ratio = cfg.total_time / g.step;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("total time " + std::to_string(cfg.total_time) +
                                " is not an integer multiple of the step tau/K = " +
                                std::to_string(g.step));
  }
  g.n_steps = static_cast<int>(n);
  return g;
}

namespace detail {

/// H = H_chain + c |psi><psi| applied without forming the dense sum.
struct ControlledChain {
  const SparseOperator* chain = nullptr;
  double c = 0.0;
  const StateVector* psi = nullptr;

  // out += scale * H * x
  void add_left(Operator& out, cd scale, const Operator& x) const {
    out.noalias() += scale * ((*chain) * x);
    if (c != 0.0) {
      const Eigen::RowVectorXcd v = psi->adjoint() * x;
      out.noalias() += (scale * c) * (*psi) * v;
    }
  }
  // out += scale * x * H
  void add_right(Operator& out, cd scale, const Operator& x) const {
    out.noalias() += scale * (x * (*chain));
    if (c != 0.0) {
      const Eigen::VectorXcd v = x * (*psi);
      out.noalias() += (scale * c) * v * psi->adjoint();
    }
  }
};

struct DenseHamiltonian {
  const Operator* h = nullptr;
  void add_left(Operator& out, cd scale, const Operator& x) const {
    out.noalias() += scale * ((*h) * x);
  }
  void add_right(Operator& out, cd scale, const Operator& x) const {
    out.noalias() += scale * (x * (*h));
  }
};

struct Workspace {
  Operator s;    // sum_k (L_k^dagger Oz_k + L_k Ow_k)
  Operator m;
  Operator tmp;
  Operator tmp2;
};

inline void check_rho_dims(const Operator& rho, Eigen::Index d) {
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("density matrix dimension mismatch");
  }
}

// drho = M + M^dagger with M = -i H rho.
template <class Ham>
void closed_kernel(const Ham& h, const Operator& rho, Operator& out, Workspace& ws) {
  ws.m.setZero(rho.rows(), rho.cols());
  h.add_left(ws.m, -kI, rho);
  out = ws.m + ws.m.adjoint();
}

// The closed master equation rewritten as drho = M + M^dagger with
//   M = -i H rho - S rho + sum_j [L_j (rho Oz_j^dagger) + L_j^dagger (rho Ow_j^dagger)].
// Expects ws.s to hold the feedback sum S for the current O-bars.
template <class Ham>
void master_kernel(const Ham& h, const Couplings& l, const OBarSet& o, const Operator& rho,
                   Operator& out, Workspace& ws) {
  ws.m.setZero(rho.rows(), rho.cols());
  h.add_left(ws.m, -kI, rho);
  ws.m.noalias() -= ws.s * rho;
  for (std::size_t j = 0; j < l.size(); ++j) {
    ws.tmp.noalias() = rho * o.z[j].adjoint();
    l.ops[j].add_left(ws.m, 1.0, ws.tmp);
    ws.tmp.noalias() = rho * o.w[j].adjoint();
    l.adjoints[j].add_left(ws.m, 1.0, ws.tmp);
  }
  out = ws.m + ws.m.adjoint();
}

template <class Ham>
void obar_kernel(const Ham& h, const Couplings& l, const OBarSet& o, const BathParams& p,
                 OBarSet& d, Workspace& ws) {
  const cd drive_z = correlation_alpha_z(p, 0.0);
  const double drive_w = correlation_alpha_w(p, 0.0);
  auto one = [&](const Operator& ob, const Operator& drive_op, cd drive, Operator& out) {
    out = drive * drive_op - p.memory_rate * ob;
    h.add_left(out, -kI, ob);
    h.add_right(out, kI, ob);
    out.noalias() -= ws.s * ob;
    out.noalias() += ob * ws.s;
  };
  for (std::size_t j = 0; j < l.size(); ++j) {
    one(o.z[j], l.dense[j], drive_z, d.z[j]);
    one(o.w[j], l.dense_adjoint[j], drive_w, d.w[j]);
  }
}

// drho = M + M^dagger with
//   M = -i H rho + (Gamma T / 2) sum_j [L rho L^dag - L^dag L rho + L^dag rho L - L L^dag rho].
template <class Ham>
void lindblad_kernel(const Ham& h, const Couplings& l, const BathParams& p, const Operator& rho,
                     Operator& out, Workspace& ws) {
  const double kappa = 0.5 * p.coupling * p.temperature;
  const Eigen::Index d = rho.rows();
  ws.m.setZero(d, d);
  h.add_left(ws.m, -kI, rho);
  if (kappa != 0.0) {
    for (std::size_t j = 0; j < l.size(); ++j) {
      ws.tmp.setZero(d, d);
      l.ops[j].add_left(ws.tmp, 1.0, rho);  // L rho
      l.adjoints[j].add_right(ws.m, kappa, ws.tmp);
      l.adjoints[j].add_left(ws.m, -kappa, ws.tmp);
      ws.tmp.setZero(d, d);
      l.adjoints[j].add_left(ws.tmp, 1.0, rho);  // L^dag rho
      l.ops[j].add_right(ws.m, kappa, ws.tmp);
      l.ops[j].add_left(ws.m, -kappa, ws.tmp);
    }
  }
  out = ws.m + ws.m.adjoint();
}

}  // namespace detail

/// Right-hand side of the closed non-Markovian master equation
///   -i[H, rho] + sum_j { [L_j, rho Oz_j^dag] - [L_j^dag, Oz_j rho]
///                        + [L_j^dag, rho Ow_j^dag] - [L_j, Ow_j rho] }.
inline Operator master_rhs(const Operator& rho, const OBarSet& obars, const Couplings& l,
                           const Operator& h_sys) {
  detail::check_obar_dims(h_sys, l, obars);
  detail::check_rho_dims(rho, h_sys.rows());
  detail::Workspace ws;
  detail::obar_feedback(l, obars, ws.s);
  Operator out;
  detail::master_kernel(detail::DenseHamiltonian{&h_sys}, l, obars, rho, out, ws);
  return out;
}

/// Markov-limit (Lindblad) right-hand side with emission and absorption
/// channels of equal rate Gamma T / 2.
inline Operator lindblad_rhs(const Operator& rho, const Couplings& l, const BathParams& p,
                             const Operator& h_sys) {
  if (h_sys.rows() != h_sys.cols() || l.dim() != h_sys.rows()) {
    throw std::invalid_argument("operator dimension mismatch in Lindblad evolution");
  }
  detail::check_rho_dims(rho, h_sys.rows());
  detail::Workspace ws;
  Operator out;
  detail::lindblad_kernel(detail::DenseHamiltonian{&h_sys}, l, p, rho, out, ws);
  return out;
}

namespace detail {

struct JointState {
  Operator rho;
  OBarSet obar;

  void set_combination(const JointState& y, double a, const JointState& k) {
    rho = y.rho + a * k.rho;
    for (std::size_t j = 0; j < obar.size(); ++j) {
      obar.z[j] = y.obar.z[j] + a * k.obar.z[j];
      obar.w[j] = y.obar.w[j] + a * k.obar.w[j];
    }
  }
  void add(double a, const JointState& k) {
    rho += a * k.rho;
    for (std::size_t j = 0; j < obar.size(); ++j) {
      obar.z[j] += a * k.obar.z[j];
      obar.w[j] += a * k.obar.w[j];
    }
  }
};

class JointSystem {
 public:
  JointSystem(const SimConfig& cfg, const StepGrid& grid)
      : cfg_(cfg),
        grid_(grid),
        chain_(build_xy_hamiltonian_sparse(cfg.chain)),
        couplings_(make_couplings(cfg.lindblad, cfg.coupling, cfg.chain.n_sites)) {
    const bool bath_active = cfg.evolution != Evolution::closed && cfg.bath.coupling != 0.0;
    mode_ = !bath_active ? Evolution::closed : cfg.evolution;
    n_obar_ = mode_ == Evolution::non_markovian ? couplings_.size() : 0;
    if (cfg.pulse.shape != PulseShape::none) {
      std::vector<double> half_grid(2 * grid.n_steps + 1);
      for (std::size_t k = 0; k < half_grid.size(); ++k) half_grid[k] = 0.5 * grid.step * k;
      reference_ = pst_trajectory(cfg.chain.n_sites, half_grid);
    }
  }

  std::size_t n_obar() const { return n_obar_; }
  Eigen::Index dim() const { return chain_.rows(); }

  /// Control value used throughout step `k` (every RK4 stage of that step).
  double step_control(int k, int half_index) const {
    switch (cfg_.pulse.shape) {
      case PulseShape::none: return 0.0;
      case PulseShape::rectangular:
        return rectangular_segment_value(cfg_.pulse, k / grid_.steps_per_segment);
      case PulseShape::sine:
        return pulse_value(cfg_.pulse, 0.5 * grid_.step * half_index);
    }
    return 0.0;
  }

  const StateVector* reference(int half_index) const {
    return reference_.states.empty() ? nullptr : &reference_.states[half_index];
  }

  /// Derivative at half-grid index `half_index` using the control of step `k`.
  void rhs(int k, int half_index, const JointState& y, JointState& dy) {
    const double c = step_control(k, half_index);
    const ControlledChain h{&chain_, c, reference(half_index)};
    switch (mode_) {
      case Evolution::closed:
        closed_kernel(h, y.rho, dy.rho, ws_);
        break;
      case Evolution::lindblad_limit:
        lindblad_kernel(h, couplings_, cfg_.bath, y.rho, dy.rho, ws_);
        break;
      case Evolution::non_markovian:
        obar_feedback(couplings_, y.obar, ws_.s);
        master_kernel(h, couplings_, y.obar, y.rho, dy.rho, ws_);
        if (cfg_.obar_sees_control) {
          obar_kernel(h, couplings_, y.obar, cfg_.bath, dy.obar, ws_);
        } else {
          obar_kernel(ControlledChain{&chain_, 0.0, nullptr}, couplings_, y.obar, cfg_.bath,
                      dy.obar, ws_);
        }
        break;
    }
  }

 private:
  const SimConfig& cfg_;
  StepGrid grid_;
  SparseOperator chain_;
  Couplings couplings_;
  Evolution mode_;
  std::size_t n_obar_ = 0;
  ReferenceTrajectory reference_;
  Workspace ws_;
};

inline JointState zero_state(std::size_t n_obar, Eigen::Index d) {
  return {Operator::Zero(d, d), OBarSet::zeros(n_obar, d)};
}

}  // namespace detail

/// Fixed-step RK4 integration of rho jointly with the O-bar operators from
/// rho(0) = |1 0 ... 0><1 0 ... 0| and O-bar(0) = 0.
inline Trajectory evolve(const SimConfig& cfg) {
  cfg.chain.validate();
  cfg.pulse.validate();
  std::string warning;
  if (cfg.evolution != Evolution::closed) warning = cfg.bath.validate();
  const StepGrid grid = resolve_grid(cfg);
  const int n_sites = cfg.chain.n_sites;

  detail::JointSystem sys(cfg, grid);
  const Eigen::Index d = sys.dim();
  const std::size_t n_obar = sys.n_obar();

  Trajectory traj;
  traj.n_sites = n_sites;
  traj.n_steps = grid.n_steps;
  traj.step = grid.step;
  traj.total_time = cfg.total_time;
  traj.psi0 = initial_state(n_sites);
  traj.target = target_state(n_sites);
  if (!warning.empty()) traj.warnings.push_back(warning);

  const std::size_t n_points = static_cast<std::size_t>(grid.n_steps) + 1;
  const std::size_t stride =
      std::max<std::size_t>(1, (n_points + cfg.max_stored_samples - 1) /
                                   std::max<std::size_t>(1, cfg.max_stored_samples));
  for (auto* v : {&traj.times, &traj.fidelity, &traj.control_value, &traj.instantaneous_cost,
                  &traj.rho_dot_norm, &traj.trace_error, &traj.hermiticity_error}) {
    v->reserve(n_points);
  }

  detail::JointState y = detail::zero_state(n_obar, d);
  y.rho = traj.psi0 * traj.psi0.adjoint();
  detail::JointState k1 = detail::zero_state(n_obar, d), k2 = k1, k3 = k1, k4 = k1, tmp = k1;

  auto record = [&](int k, const detail::JointState& state, const Operator& rho_dot) {
    const double t = grid.step * k;
    const double c = sys.step_control(k, 2 * k);
    const StateVector* psi1 = sys.reference(2 * k);
    const double tr_err = std::abs(state.rho.trace() - cd{1.0, 0.0});
    const double herm_err = (state.rho - state.rho.adjoint()).norm();
    if (tr_err > cfg.trace_guard) {
      throw NumericalInstability("trace drift " + std::to_string(tr_err) + " at step " +
                                     std::to_string(k) + " (t = " + std::to_string(t) + ")",
                                 k);
    }
    if (herm_err > cfg.hermiticity_guard) {
      throw NumericalInstability("hermiticity drift " + std::to_string(herm_err) +
                                     " at step " + std::to_string(k) +
                                     " (t = " + std::to_string(t) + ")",
                                 k);
    }
    double f = 0.0;
    try {
      f = fidelity(state.rho, traj.target);
    } catch (const InvalidDensity& e) {
      throw NumericalInstability(std::string(e.what()) + " at step " + std::to_string(k), k);
    }
    traj.times.push_back(t);
    traj.fidelity.push_back(f);
    traj.control_value.push_back(c);
    traj.instantaneous_cost.push_back(psi1 ? instantaneous_cost(c, *psi1) : 0.0);
    traj.rho_dot_norm.push_back(rho_dot_norm(rho_dot, cfg.norm));
    traj.trace_error.push_back(tr_err);
    traj.hermiticity_error.push_back(herm_err);
    traj.max_trace_error = std::max(traj.max_trace_error, tr_err);
    traj.max_hermiticity_error = std::max(traj.max_hermiticity_error, herm_err);
    if (static_cast<std::size_t>(k) % stride == 0 || k == grid.n_steps) {
      traj.sample_index.push_back(static_cast<std::size_t>(k));
      traj.rho_samples.push_back(state.rho);
      double lam = std::numeric_limits<double>::quiet_NaN();
      if (cfg.monitor_positivity) {
        Eigen::SelfAdjointEigenSolver<Operator> es(state.rho, Eigen::EigenvaluesOnly);
        lam = es.eigenvalues()(0);
        traj.min_eigenvalue_overall =
            std::isnan(traj.min_eigenvalue_overall) ? lam
                                                    : std::min(traj.min_eigenvalue_overall, lam);
      }
      traj.min_eigenvalue.push_back(lam);
    }
  };

  const double h = grid.step;
  for (int k = 0; k < grid.n_steps; ++k) {
    const int i0 = 2 * k;
    sys.rhs(k, i0, y, k1);
    record(k, y, k1.rho);
    tmp.set_combination(y, 0.5 * h, k1);
    sys.rhs(k, i0 + 1, tmp, k2);
    tmp.set_combination(y, 0.5 * h, k2);
    sys.rhs(k, i0 + 1, tmp, k3);
    tmp.set_combination(y, h, k3);
    sys.rhs(k, i0 + 2, tmp, k4);
    y.add(h / 6.0, k1);
    y.add(h / 3.0, k2);
    y.add(h / 3.0, k3);
    y.add(h / 6.0, k4);
  }
  // Derivative at the final point uses the right-continuous control value.
  sys.rhs(grid.n_steps, 2 * grid.n_steps, y, k1);
  record(grid.n_steps, y, k1.rho);

  traj.rho_final = y.rho;
  traj.obars_final = n_obar ? y.obar : OBarSet::zeros(0, d);
  return traj;
}

}  // namespace aest
