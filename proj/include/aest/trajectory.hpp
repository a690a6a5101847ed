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

#include <limits>
#include <string>
#include <vector>

#include "aest/bath.hpp"
#include "aest/operators.hpp"

namespace aest {

/// Result of one evolution. Scalar series have one entry per grid point
/// (n_steps + 1); density matrices are kept on a decimated subset.
struct Trajectory {
  int n_sites = 0;
  int n_steps = 0;
  double step = 0.0;
  double total_time = 0.0;

  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> control_value;
  std::vector<double> instantaneous_cost;
  std::vector<double> rho_dot_norm;
  std::vector<double> trace_error;
  std::vector<double> hermiticity_error;

  std::vector<std::size_t> sample_index;  // grid indices of stored rho
  std::vector<Operator> rho_samples;
  std::vector<double> min_eigenvalue;  // per stored sample; NaN when not monitored

  Operator rho_final;
  OBarSet obars_final;
  StateVector psi0;
  StateVector target;

  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue_overall = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;

  double final_fidelity() const { return fidelity.empty() ? 0.0 : fidelity.back(); }
};

}  // namespace aest
