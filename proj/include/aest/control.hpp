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
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aest/operators.hpp"

namespace aest {

enum class PulseShape { none, rectangular, sine };

inline std::string_view to_string(PulseShape s) {
  switch (s) {
    case PulseShape::none: return "none";
    case PulseShape::rectangular: return "rectangular";
    case PulseShape::sine: return "sine";
  }
  return "?";
}

/// Zero-area control pulse train. `half_period` is tau; the sine pulse uses
/// omega = pi / tau.
struct PulseSpec {
  PulseShape shape = PulseShape::none;
  double intensity = 0.0;
  double half_period = 0.0;

  void validate() const {
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
      throw std::invalid_argument("pulse intensity must be finite and >= 0");
    }
    if (shape != PulseShape::none && !(half_period > 0.0 && std::isfinite(half_period))) {
      throw std::invalid_argument("pulse half-period must be finite and > 0");
    }
  }
};

/// Control function c(t). The rectangular train is +I on [n tau, (n+1) tau)
/// for even n and -I for odd n.
inline double pulse_value(const PulseSpec& p, double t) {
  switch (p.shape) {
    case PulseShape::none: return 0.0;
    case PulseShape::rectangular: {
      const auto n = static_cast<long long>(std::floor(t / p.half_period));
      return (n % 2 == 0) ? p.intensity : -p.intensity;
    }
    case PulseShape::sine:
      return p.intensity * std::sin(std::numbers::pi * t / p.half_period);
  }
  return 0.0;
}

/// Value of the rectangular train on half-period `segment` (0-based); used by
/// the integrator so that every stage of a step sees the same side of a
/// discontinuity.
inline double rectangular_segment_value(const PulseSpec& p, long long segment) {
  return (segment % 2 == 0) ? p.intensity : -p.intensity;
}

struct EffectivenessReport {
  bool effective = false;
  double residual = 0.0;  // distance to the nearest m, or |J0(I tau / pi)|
  double argument = 0.0;  // I tau / (2 pi) for rectangular, I tau / pi for sine
  std::string diagnostic;
};

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, x); }

inline EffectivenessReport check_effective(const PulseSpec& p) {
  if (p.shape == PulseShape::none) {
    throw std::invalid_argument("effectiveness is undefined for shape = none");
  }
  p.validate();
  EffectivenessReport r;
  const double area = p.intensity * p.half_period;
  if (p.shape == PulseShape::rectangular) {
    r.argument = area / (2.0 * std::numbers::pi);
    const double m = std::round(r.argument);
    r.residual = std::abs(r.argument - m);
    r.effective = m >= 1.0 && r.residual < 1e-6;
    r.diagnostic = "I*tau/(2 pi) = " + std::to_string(r.argument) +
                   ", distance to nearest integer " + std::to_string(r.residual);
  } else {
    r.argument = area / std::numbers::pi;
    r.residual = std::abs(bessel_j0(r.argument));
    r.effective = r.residual < 1e-3;
    r.diagnostic = "|J0(I*tau/pi)| = " + std::to_string(r.residual) +
                   " at I*tau/pi = " + std::to_string(r.argument);
  }
  return r;
}

/// exp(-i H t)|psi0> for a time-independent Hermitian H, evaluated at
/// arbitrary t from one eigendecomposition.
class SpectralPropagator {
 public:
  SpectralPropagator(const Operator& hamiltonian, const StateVector& psi0) {
    Eigen::SelfAdjointEigenSolver<Operator> es(hamiltonian);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("eigendecomposition of the reference Hamiltonian failed");
    }
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    coeffs_ = vectors_.adjoint() * psi0;
    psi0_ = psi0;
  }

  StateVector at(double t) const {
    if (t == 0.0) return psi0_;
    Eigen::VectorXcd phased(coeffs_.size());
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
      phased(k) = std::exp(-kI * energies_(k) * t) * coeffs_(k);
    }
    return vectors_ * phased;
  }

 private:
  Eigen::VectorXd energies_;
  Operator vectors_;
  Eigen::VectorXcd coeffs_;
  StateVector psi0_;
};

struct ReferenceTrajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
};

/// |psi_1(t_k)> = exp(-i H_PST t_k)|1 0 ... 0> on the given grid.
inline ReferenceTrajectory pst_trajectory(int n_sites, std::span<const double> time_grid) {
  if (time_grid.empty() || time_grid.front() != 0.0) {
    throw std::invalid_argument("reference time grid must start at 0");
  }
  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    if (!(time_grid[k] > time_grid[k - 1])) {
      throw std::invalid_argument("reference time grid must be strictly increasing");
    }
  }
  const SpectralPropagator prop(build_xy_hamiltonian(pst_couplings(n_sites)),
                                initial_state(n_sites));
  ReferenceTrajectory ref;
  ref.times.assign(time_grid.begin(), time_grid.end());
  ref.states.reserve(time_grid.size());
  for (double t : time_grid) ref.states.push_back(prop.at(t));
  return ref;
}

/// H_LEO = c |psi1><psi1|.
inline Operator leo_hamiltonian(double c, const StateVector& psi1) {
  return c * (psi1 * psi1.adjoint());
}

}  // namespace aest
