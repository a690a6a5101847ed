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
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aest/operators.hpp"
#include "aest/trajectory.hpp"

namespace aest {

class InvalidDensity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentTrajectory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RhoDotNorm { hilbert_schmidt, operator_norm };

inline constexpr double kExpectationClamp = 1e-9;

/// <psi|rho|psi> clamped into [0, 1]; values further than 1e-9 outside are
/// rejected.
inline double clamped_expectation(const Operator& rho, const StateVector& psi) {
  const double e = psi.dot(rho * psi).real();
  if (e < -kExpectationClamp || e > 1.0 + kExpectationClamp || !std::isfinite(e)) {
    throw InvalidDensity("expectation value " + std::to_string(e) +
                         " outside [0, 1]; density matrix is not physical");
  }
  return std::clamp(e, 0.0, 1.0);
}

/// F = sqrt(<target|rho|target>).
inline double fidelity(const Operator& rho, const StateVector& target) {
  return std::sqrt(clamped_expectation(rho, target));
}

inline double hs_norm(const Operator& a) { return a.norm(); }

/// Largest singular value.
inline double operator_norm(const Operator& a) {
  if (a.size() == 0) return 0.0;
  if (a.isApprox(a.adjoint(), 1e-12) || a.isZero(0.0)) {
    Eigen::SelfAdjointEigenSolver<Operator> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Operator> svd(a);
  return svd.singularValues()(0);
}

inline double rho_dot_norm(const Operator& rho_dot, RhoDotNorm kind) {
  return kind == RhoDotNorm::hilbert_schmidt ? hs_norm(rho_dot) : operator_norm(rho_dot);
}

/// d_t C = |c| sqrt(sum_n |<n|psi1>|^2) over the full computational basis.
inline double instantaneous_cost(double c, const StateVector& psi1) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < psi1.size(); ++n) sum += std::norm(psi1(n));
  return std::abs(c) * std::sqrt(sum);
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double acc = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  return acc;
}

struct CostReport {
  std::vector<double> instantaneous;
  double total = 0.0;
};

inline CostReport total_cost(const Trajectory& traj) {
  CostReport r;
  r.instantaneous = traj.instantaneous_cost;
  r.total = trapezoid(traj.times, traj.instantaneous_cost);
  return r;
}

/// arccos(sqrt(<psi0|rho_t|psi0>)) in [0, pi/2].
inline double bures_angle(const StateVector& psi0, const Operator& rho_t) {
  return std::acos(std::sqrt(clamped_expectation(rho_t, psi0)));
}

struct QsltReport {
  double bures_angle = 0.0;
  double lambda_t = 0.0;  // time-averaged norm of drho/dt
  double tau_qsl = 0.0;
  double driving_time = 0.0;
};

/// tau_QSL = sin^2(L(rho_0, rho_t)) / Lambda_t with Lambda_t the time average
/// of the stored drho/dt norms over [0, t].
inline QsltReport qslt(const Trajectory& traj, const StateVector& psi0) {
  if (traj.times.size() < 2) throw std::invalid_argument("qslt needs at least two samples");
  QsltReport r;
  r.driving_time = traj.times.back() - traj.times.front();
  r.lambda_t = trapezoid(traj.times, traj.rho_dot_norm) / r.driving_time;
  r.bures_angle = bures_angle(psi0, traj.rho_final);
  if (r.lambda_t < 1e-12) {
    if (r.bures_angle < 1e-9) {
      r.tau_qsl = 0.0;
      return r;
    }
    throw InconsistentTrajectory("state moved (Bures angle " + std::to_string(r.bures_angle) +
                                 ") but the recorded evolution speed is zero");
  }
  const double s = std::sin(r.bures_angle);
  r.tau_qsl = s * s / r.lambda_t;
  return r;
}

}  // namespace aest
