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

#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "aest/metrics.hpp"
#include "aest/propagator.hpp"
#include "test_util.hpp"

using namespace aest;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using aest::test::random_density;

namespace {

constexpr double kPi = std::numbers::pi;

Operator projector(const StateVector& psi) { return psi * psi.adjoint(); }

SimConfig closed_config(int n, PulseSpec pulse) {
  SimConfig cfg;
  cfg.chain = uniform_couplings(n);
  cfg.evolution = Evolution::closed;
  cfg.pulse = pulse;
  return cfg;
}

}  // namespace

TEST_CASE("fidelity examples", "[metrics]") {
  const StateVector psi = basis_state({2}, 3);
  CHECK(fidelity(projector(psi), psi) == 1.0);
  for (int n = 1; n <= 5; ++n) {
    const auto d = static_cast<Eigen::Index>(dimension(n));
    const Operator mixed = Operator::Identity(d, d) / static_cast<double>(d);
    CHECK_THAT(fidelity(mixed, target_state(n)),
               WithinAbs(std::sqrt(1.0 / static_cast<double>(d)), 1e-15));
  }
  CHECK(fidelity(projector(basis_state({1}, 2)), basis_state({2}, 2)) == 0.0);
}

TEST_CASE("fidelity clamps round-off and rejects unphysical input", "[metrics]") {
  const StateVector psi = target_state(2);
  Operator rho = projector(psi);
  rho(1, 1) += 5e-10;
  CHECK(fidelity(rho, psi) == 1.0);
  rho(1, 1) = -5e-10;
  CHECK(fidelity(rho, psi) == 0.0);
  rho(1, 1) = -1e-6;
  CHECK_THROWS_AS(fidelity(rho, psi), InvalidDensity);
  rho(1, 1) = 1.001;
  CHECK_THROWS_AS(fidelity(rho, psi), InvalidDensity);
}

TEST_CASE("target population never exceeds the trace", "[metrics][property]") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const Operator rho = random_density(rng, Eigen::Index{1} << n);
    const double f = fidelity(rho, target_state(n));
    CHECK(f * f <= rho.trace().real() + 1e-12);
  }
}

TEST_CASE("norm examples", "[metrics]") {
  CHECK_THAT(hs_norm(Operator::Identity(8, 8)), WithinAbs(std::sqrt(8.0), 1e-15));
  CHECK(hs_norm(Operator::Zero(4, 4)) == 0.0);
  std::mt19937 rng(4);
  StateVector psi = aest::test::random_matrix(rng, 8).col(2);
  psi.normalize();
  // |c| ||psi||^2 computed from the outer product entries directly.
  const double c = -3.5;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j) sum += std::norm(c * psi(i) * std::conj(psi(j)));
  CHECK_THAT(hs_norm(c * projector(psi)), WithinAbs(std::sqrt(sum), 1e-13));
  CHECK_THAT(hs_norm(c * projector(psi)), WithinAbs(3.5, 1e-13));

  Operator a = Operator::Zero(2, 2);
  a(0, 1) = 3.0;
  a(1, 0) = cd(0.0, 4.0);
  CHECK_THAT(operator_norm(a), WithinAbs(4.0, 1e-14));
  CHECK_THAT(operator_norm(Operator::Identity(4, 4) * -2.0), WithinAbs(2.0, 1e-14));
  CHECK(operator_norm(Operator::Zero(3, 3)) == 0.0);
  CHECK(rho_dot_norm(a, RhoDotNorm::hilbert_schmidt) == hs_norm(a));
  CHECK(rho_dot_norm(a, RhoDotNorm::operator_norm) == operator_norm(a));
}

TEST_CASE("instantaneous cost examples", "[metrics]") {
  const StateVector psi = initial_state(3);
  CHECK(instantaneous_cost(0.0, psi) == 0.0);
  CHECK_THAT(instantaneous_cost(32.0, psi), WithinAbs(32.0, 1e-14));
  CHECK_THAT(instantaneous_cost(-32.0, psi), WithinAbs(32.0, 1e-14));
}

TEST_CASE("both cost expressions agree", "[metrics][property]") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    StateVector psi = aest::test::random_matrix(rng, 16).col(trial % 16);
    psi.normalize();
    const double c = u(rng);
    CHECK_THAT(instantaneous_cost(c, psi), WithinAbs(hs_norm(leo_hamiltonian(c, psi)), 1e-10));
  }
}

TEST_CASE("trapezoid rule", "[metrics]") {
  const std::vector<double> x = {0.0, 1.0, 3.0};
  const std::vector<double> y = {1.0, 1.0, 2.0};
  CHECK(trapezoid(x, y) == 4.0);
  CHECK_THROWS_AS(trapezoid(x, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("total cost of pulse trains", "[metrics]") {
  const Trajectory none = evolve(closed_config(3, {}));
  CHECK(total_cost(none).total == 0.0);

  const Trajectory rect32 = evolve(closed_config(3, {PulseShape::rectangular, 32.0, kPi / 16}));
  CHECK_THAT(total_cost(rect32).total, WithinAbs(8.0 * kPi, 1e-9 * 32.0));

  const Trajectory rect64 = evolve(closed_config(3, {PulseShape::rectangular, 64.0, kPi / 32}));
  for (double v : rect64.instantaneous_cost) CHECK_THAT(v, WithinAbs(64.0, 1e-9));
  CHECK_THAT(total_cost(rect64).total, WithinRel(64.0 * kPi / 4, 1e-6));

  // Sine train: I * (2 tau / pi) per half-period, 8 half-periods; the
  // trapezoid rule with 64 points per half-period is good to about 2e-4.
  const double tau = kPi / 32, intensity = 76.96;
  const Trajectory sine = evolve(closed_config(3, {PulseShape::sine, intensity, tau}));
  const double closed_form = intensity * (2.0 * tau / kPi) * 8.0;
  CHECK_THAT(total_cost(sine).total, WithinRel(closed_form, 5e-4));

  const Trajectory zero = evolve(closed_config(3, {PulseShape::rectangular, 0.0, kPi / 16}));
  CHECK(total_cost(zero).total == 0.0);
}

TEST_CASE("Bures angle examples", "[metrics]") {
  const StateVector psi = initial_state(2);
  CHECK(bures_angle(psi, projector(psi)) == 0.0);
  CHECK_THAT(bures_angle(psi, projector(target_state(2))), WithinAbs(kPi / 2, 1e-15));
  CHECK_THAT(bures_angle(initial_state(1), Operator::Identity(2, 2) / 2.0),
             WithinAbs(kPi / 4, 1e-15));
}

TEST_CASE("Bures angle is nonincreasing in the overlap", "[metrics][property]") {
  const StateVector psi = initial_state(1);
  double previous = kPi;
  for (int k = 0; k <= 100; ++k) {
    const double p = k / 100.0;
    Operator rho = Operator::Zero(2, 2);
    rho(1, 1) = p;
    rho(0, 0) = 1.0 - p;
    const double angle = bures_angle(psi, rho);
    CHECK(angle <= previous);
    previous = angle;
  }
}

TEST_CASE("QSLT of a frozen trajectory is zero", "[metrics]") {
  SimConfig cfg;
  cfg.chain = ChainSpec{3, {0.0, 0.0}};
  cfg.evolution = Evolution::closed;
  const Trajectory tr = evolve(cfg);
  const QsltReport q = qslt(tr, tr.psi0);
  CHECK(q.tau_qsl == 0.0);
  CHECK(q.lambda_t == 0.0);
  CHECK(q.bures_angle == 0.0);
  CHECK_THAT(q.driving_time, WithinAbs(kPi / 4, 1e-15));
}

TEST_CASE("QSLT detects a trajectory with no recorded speed", "[metrics]") {
  Trajectory tr;
  tr.times = {0.0, 1.0};
  tr.rho_dot_norm = {0.0, 0.0};
  tr.rho_final = projector(target_state(2));
  CHECK_THROWS_AS(qslt(tr, initial_state(2)), InconsistentTrajectory);
  tr.times = {0.0};
  CHECK_THROWS_AS(qslt(tr, initial_state(2)), std::invalid_argument);
}

TEST_CASE("QSLT never exceeds the driving time", "[metrics][property]") {
  for (Evolution mode : {Evolution::closed, Evolution::non_markovian}) {
    for (double intensity : {0.0, 32.0, 96.0}) {
      SimConfig cfg;
      cfg.chain = uniform_couplings(3);
      cfg.bath = {0.04, 1.0, 30.0};
      cfg.lindblad = LindbladKind::sigma_x;
      cfg.evolution = mode;
      cfg.pulse = {PulseShape::rectangular, intensity, kPi / 16};
      for (RhoDotNorm norm : {RhoDotNorm::hilbert_schmidt, RhoDotNorm::operator_norm}) {
        cfg.norm = norm;
        const Trajectory tr = evolve(cfg);
        const QsltReport q = qslt(tr, tr.psi0);
        CHECK(q.tau_qsl > 0.0);
        CHECK(q.tau_qsl <= q.driving_time + 1e-9);
      }
    }
  }
}
