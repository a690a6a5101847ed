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
#include <stdexcept>
#include <string>
#include <vector>

#include "aest/operators.hpp"

namespace aest {

/// Ornstein-Uhlenbeck bath shared by every site: coupling strength Gamma,
/// inverse memory time gamma and temperature T (k_B = hbar = 1).
struct BathParams {
  double coupling = 0.0;     // Gamma
  double memory_rate = 1.0;  // gamma
  double temperature = 0.0;  // T

  static constexpr double kMaxCoupling = 0.1;
  static constexpr double kWarnCoupling = 0.05;

  /// Throws on invalid parameters; returns a warning (possibly empty) when
  /// Gamma is above the weak-coupling window.
  std::string validate() const {
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
      throw std::invalid_argument("bath coupling Gamma must be finite and >= 0");
    }
    if (coupling > kMaxCoupling) {
      throw std::invalid_argument("bath coupling Gamma = " + std::to_string(coupling) +
                                  " exceeds the weak-coupling limit 0.1");
    }
    if (!(memory_rate > 0.0) || !std::isfinite(memory_rate)) {
      throw std::invalid_argument("bath memory rate gamma must be finite and > 0");
    }
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
      throw std::invalid_argument("bath temperature must be finite and >= 0");
    }
    if (coupling > kWarnCoupling) {
      return "Gamma = " + std::to_string(coupling) +
             " is above 0.05; weak-coupling closure may be inaccurate";
    }
    return {};
  }
};

inline double ou_kernel(const BathParams& p, double dt) {
  return 0.5 * p.memory_rate * std::exp(-p.memory_rate * dt);
}

/// alpha_z(dt) = Gamma T Lambda + i Gamma dLambda/dt with Lambda the OU kernel.
inline cd correlation_alpha_z(const BathParams& p, double dt) {
  if (dt < 0.0) throw std::invalid_argument("correlation lag must be >= 0");
  const double lambda = ou_kernel(p, dt);
  return {p.coupling * p.temperature * lambda, -p.coupling * p.memory_rate * lambda};
}

inline double correlation_alpha_w(const BathParams& p, double dt) {
  if (dt < 0.0) throw std::invalid_argument("correlation lag must be >= 0");
  return p.coupling * p.temperature * ou_kernel(p, dt);
}

enum class LindbladKind { sigma_minus, sigma_x, sigma_z };
enum class CouplingMode { per_site, collective };

inline PauliKind pauli_of(LindbladKind k) {
  switch (k) {
    case LindbladKind::sigma_minus: return PauliKind::minus;
    case LindbladKind::sigma_x: return PauliKind::x;
    case LindbladKind::sigma_z: return PauliKind::z;
  }
  return PauliKind::minus;
}

/// Per-bath coupling operators L_j. In per-site mode bath j couples through
/// the operator on site j; in collective mode every bath couples through the
/// sum over all sites.
struct Couplings {
  std::vector<SiteOperator> ops;
  std::vector<SiteOperator> adjoints;
  std::vector<Operator> dense;
  std::vector<Operator> dense_adjoint;

  std::size_t size() const { return ops.size(); }
  Eigen::Index dim() const { return dense.empty() ? 0 : dense.front().rows(); }
};

inline Couplings make_couplings(LindbladKind kind, CouplingMode mode, int n_sites) {
  Couplings c;
  std::vector<int> all_sites;
  for (int s = 1; s <= n_sites; ++s) all_sites.push_back(s);
  for (int j = 1; j <= n_sites; ++j) {
    if (mode == CouplingMode::per_site) {
      c.ops.emplace_back(pauli_of(kind), j, n_sites);
    } else {
      c.ops.emplace_back(pauli_of(kind), all_sites, n_sites);
    }
    c.adjoints.push_back(c.ops.back().adjoint());
    c.dense.push_back(c.ops.back().dense());
    c.dense_adjoint.push_back(c.dense.back().adjoint());
  }
  return c;
}

/// Memory-integrated auxiliary operators, one (z, w) pair per bath.
struct OBarSet {
  std::vector<Operator> z;
  std::vector<Operator> w;

  static OBarSet zeros(std::size_t n_baths, Eigen::Index dim) {
    OBarSet s;
    s.z.assign(n_baths, Operator::Zero(dim, dim));
    s.w.assign(n_baths, Operator::Zero(dim, dim));
    return s;
  }

  std::size_t size() const { return z.size(); }
};

namespace detail {

inline void check_obar_dims(const Operator& h, const Couplings& l, const OBarSet& o) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d) throw std::invalid_argument("Hamiltonian must be square");
  if (l.size() != o.z.size() || l.size() != o.w.size()) {
    throw std::invalid_argument("coupling and O-bar counts differ");
  }
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (l.dense[j].rows() != d || o.z[j].rows() != d || o.z[j].cols() != d ||
        o.w[j].rows() != d || o.w[j].cols() != d) {
      throw std::invalid_argument("operator dimension mismatch in O-bar evolution");
    }
  }
}

/// S = sum_k (L_k^dagger Oz_k + L_k Ow_k).
inline void obar_feedback(const Couplings& l, const OBarSet& o, Operator& s) {
  s.setZero(o.z.front().rows(), o.z.front().cols());
  for (std::size_t k = 0; k < l.size(); ++k) {
    l.adjoints[k].add_left(s, 1.0, o.z[k]);
    l.ops[k].add_left(s, 1.0, o.w[k]);
  }
}

}  // namespace detail

/// Right-hand sides of the O-bar equations:
///   dOz_j/dt = (Gamma T gamma/2 - i Gamma gamma^2/2) L_j - gamma Oz_j + [A, Oz_j]
///   dOw_j/dt = (Gamma T gamma/2) L_j^dagger - gamma Ow_j + [A, Ow_j]
/// with A = -i H - sum_k (L_k^dagger Oz_k + L_k Ow_k).
inline OBarSet obar_rhs(const Operator& h_sys, const Couplings& l, const OBarSet& o,
                        const BathParams& p) {
  detail::check_obar_dims(h_sys, l, o);
  const cd drive_z = correlation_alpha_z(p, 0.0);
  const double drive_w = correlation_alpha_w(p, 0.0);
  Operator s;
  detail::obar_feedback(l, o, s);
  const Operator a = -kI * h_sys - s;
  OBarSet d;
  d.z.reserve(l.size());
  d.w.reserve(l.size());
  for (std::size_t j = 0; j < l.size(); ++j) {
    d.z.push_back(drive_z * l.dense[j] - p.memory_rate * o.z[j] + a * o.z[j] - o.z[j] * a);
    d.w.push_back(drive_w * l.dense_adjoint[j] - p.memory_rate * o.w[j] + a * o.w[j] -
                  o.w[j] * a);
  }
  return d;
}

}  // namespace aest
