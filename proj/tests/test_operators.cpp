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

#include <random>

#include "aest/operators.hpp"
#include "test_util.hpp"

using namespace aest;
using aest::test::kron;
using aest::test::max_abs;

namespace {

// Single-qubit matrices written out by hand in the {|0>, |1>} basis.
Operator qubit(PauliKind k) {
  Operator m(2, 2);
  const cd i{0.0, 1.0};
  switch (k) {
    case PauliKind::x: m << 0, 1, 1, 0; break;
    case PauliKind::y: m << 0, i, -i, 0; break;
    case PauliKind::z: m << -1, 0, 0, 1; break;
    case PauliKind::plus: m << 0, 0, 1, 0; break;
    case PauliKind::minus: m << 0, 1, 0, 0; break;
  }
  return m;
}

// Brute-force I x ... x P x ... x I with site 1 leftmost.
Operator kron_site(PauliKind k, int site, int n) {
  Operator out = Operator::Identity(1, 1);
  for (int s = 1; s <= n; ++s) {
    out = kron(out, s == site ? qubit(k) : Operator::Identity(2, 2));
  }
  return out;
}

ChainSpec random_chain(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  ChainSpec c{n, {}};
  for (int i = 1; i < n; ++i) c.couplings.push_back(u(rng));
  return c;
}

constexpr PauliKind kAllKinds[] = {PauliKind::x, PauliKind::y, PauliKind::z, PauliKind::plus,
                                   PauliKind::minus};

}  // namespace

TEST_CASE("pauli_site single-qubit conventions", "[operators]") {
  const Operator z = pauli_site(PauliKind::z, 1, 1);
  CHECK(z(0, 0) == cd(-1.0));
  CHECK(z(1, 1) == cd(1.0));
  CHECK(z(0, 1) == cd(0.0));

  const Operator minus = pauli_site(PauliKind::minus, 1, 1);
  StateVector one(2), zero(2);
  one << 0, 1;
  zero << 1, 0;
  CHECK(max_abs(minus * one - zero) == 0.0);
  CHECK(max_abs(minus * zero) == 0.0);
}

TEST_CASE("pauli_site x on site 2 of 2 matches I (x) X", "[operators]") {
  const Operator x = pauli_site(PauliKind::x, 2, 2);
  Operator expected = Operator::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = expected(2, 3) = expected(3, 2) = 1.0;
  CHECK(max_abs(x - expected) == 0.0);
}

TEST_CASE("pauli_site agrees with a Kronecker-product oracle", "[operators]") {
  for (int n = 1; n <= 4; ++n) {
    for (int site = 1; site <= n; ++site) {
      for (PauliKind k : kAllKinds) {
        INFO("n=" << n << " site=" << site << " kind=" << to_string(k));
        CHECK(max_abs(pauli_site(k, site, n) - kron_site(k, site, n)) == 0.0);
      }
    }
  }
}

TEST_CASE("pauli_site rejects out-of-range sites", "[operators]") {
  CHECK_THROWS_AS(pauli_site(PauliKind::x, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(pauli_site(PauliKind::x, 4, 3), std::invalid_argument);
}

TEST_CASE("site operator algebra", "[operators][property]") {
  for (int n = 1; n <= 5; ++n) {
    const Operator id = Operator::Identity(1 << n, 1 << n);
    for (int site = 1; site <= n; ++site) {
      CHECK(max_abs(pauli_site(PauliKind::plus, site, n) -
                    pauli_site(PauliKind::minus, site, n).adjoint()) == 0.0);
      for (PauliKind k : {PauliKind::x, PauliKind::y, PauliKind::z}) {
        const Operator p = pauli_site(k, site, n);
        CHECK(max_abs(p * p - id) < 1e-15);
      }
      // sigma_y = i (sigma_- - sigma_+)
      const Operator y = kI * (pauli_site(PauliKind::minus, site, n) -
                               pauli_site(PauliKind::plus, site, n));
      CHECK(max_abs(y - pauli_site(PauliKind::y, site, n)) == 0.0);
    }
  }
}

TEST_CASE("coupling presets", "[operators]") {
  CHECK(uniform_couplings(3).couplings == std::vector<double>{-1.0, -1.0});
  CHECK(uniform_couplings(2).couplings == std::vector<double>{-1.0});
  const auto u7 = uniform_couplings(7);
  CHECK(u7.n_sites == 7);
  CHECK(u7.couplings == std::vector<double>(6, -1.0));

  const auto p4 = pst_couplings(4);
  REQUIRE(p4.couplings.size() == 3);
  CHECK(p4.couplings[0] == Catch::Approx(-std::sqrt(3.0)));
  CHECK(p4.couplings[1] == Catch::Approx(-2.0));
  CHECK(p4.couplings[2] == Catch::Approx(-std::sqrt(3.0)));
  CHECK(pst_couplings(2).couplings == std::vector<double>{-1.0});

  const auto p7 = pst_couplings(7);
  const double expected[] = {6, 10, 12, 12, 10, 6};
  for (int i = 0; i < 6; ++i) CHECK(p7.couplings[i] == Catch::Approx(-std::sqrt(expected[i])));
  for (int n = 2; n <= 12; ++n) {
    const auto p = pst_couplings(n);
    for (int i = 0; i < n - 1; ++i) CHECK(p.couplings[i] == p.couplings[n - 2 - i]);
  }

  CHECK_THROWS_AS(uniform_couplings(1), std::invalid_argument);
  CHECK_THROWS_AS(pst_couplings(1), std::invalid_argument);
  CHECK_THROWS_AS(build_xy_hamiltonian(ChainSpec{3, {-1.0}}), std::invalid_argument);
}

TEST_CASE("XY Hamiltonian examples", "[operators]") {
  const Operator h2 = build_xy_hamiltonian(uniform_couplings(2));
  const auto i01 = basis_index({2}, 2);
  const auto i10 = basis_index({1}, 2);
  Operator expected = Operator::Zero(4, 4);
  expected(i01, i10) = expected(i10, i01) = -2.0;
  CHECK(max_abs(h2 - expected) == 0.0);

  CHECK(max_abs(build_xy_hamiltonian(ChainSpec{2, {0.0}})) == 0.0);

  // Projection onto {|100>, |010>, |001>}: tridiagonal with -2 off-diagonals.
  const Operator h3 = build_xy_hamiltonian(uniform_couplings(3));
  const std::size_t basis[] = {basis_index({1}, 3), basis_index({2}, 3), basis_index({3}, 3)};
  Operator block(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) block(r, c) = h3(basis[r], basis[c]);
  Operator tri = Operator::Zero(3, 3);
  tri(0, 1) = tri(1, 0) = tri(1, 2) = tri(2, 1) = -2.0;
  CHECK(max_abs(block - tri) == 0.0);
}

TEST_CASE("XY Hamiltonian matches the Pauli-product definition", "[operators][property]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const ChainSpec spec = random_chain(rng, n);
    Operator oracle = Operator::Zero(1 << n, 1 << n);
    for (int i = 1; i < n; ++i) {
      oracle += spec.couplings[i - 1] *
                (kron_site(PauliKind::x, i, n) * kron_site(PauliKind::x, i + 1, n) +
                 kron_site(PauliKind::y, i, n) * kron_site(PauliKind::y, i + 1, n));
    }
    const Operator h = build_xy_hamiltonian(spec);
    CHECK(max_abs(h - oracle) < 1e-12);
    CHECK(hermiticity_error(h) < 1e-12);
    const Operator nexc = excitation_number(n);
    CHECK(max_abs(h * nexc - nexc * h) < 1e-12);
  }
}

TEST_CASE("excitation number equals sum of (1 + Z_j)/2", "[operators]") {
  const int n = 4;
  Operator oracle = Operator::Zero(16, 16);
  for (int j = 1; j <= n; ++j) {
    oracle += 0.5 * (Operator::Identity(16, 16) + pauli_site(PauliKind::z, j, n));
  }
  CHECK(max_abs(excitation_number(n) - oracle) < 1e-15);
}

TEST_CASE("basis states", "[operators]") {
  const StateVector s = basis_state({1}, 3);
  CHECK(s.size() == 8);
  CHECK(s(4) == cd(1.0));
  CHECK(s.norm() == Catch::Approx(1.0));

  const StateVector vac = basis_state(std::vector<int>{}, 2);
  CHECK(vac(0) == cd(1.0));
  CHECK(vac.norm() == 1.0);

  const StateVector last = basis_state({3}, 3);
  CHECK(last(1) == cd(1.0));
  CHECK(max_abs(last - target_state(3)) == 0.0);
  CHECK(max_abs(basis_state({1}, 3) - initial_state(3)) == 0.0);

  CHECK_THROWS_AS(basis_state({4}, 3), std::invalid_argument);
  CHECK_THROWS_AS(basis_state({0}, 3), std::invalid_argument);
}

TEST_CASE("SiteOperator structured products match dense products", "[operators][property]") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 4; ++n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    for (PauliKind k : kAllKinds) {
      std::vector<SiteOperator> ops;
      for (int s = 1; s <= n; ++s) ops.emplace_back(k, s, n);
      std::vector<int> all;
      for (int s = 1; s <= n; ++s) all.push_back(s);
      ops.emplace_back(k, all, n);
      for (const auto& op : ops) {
        const Operator x = aest::test::random_matrix(rng, d);
        const Operator dense = op.dense();
        const cd scale{0.3, -1.7};
        Operator left = Operator::Zero(d, d), right = Operator::Zero(d, d);
        op.add_left(left, scale, x);
        op.add_right(right, scale, x);
        CHECK(max_abs(left - scale * dense * x) < 1e-13);
        CHECK(max_abs(right - scale * x * dense) < 1e-13);
        CHECK(max_abs(op.adjoint().dense() - dense.adjoint()) == 0.0);
      }
    }
  }
}
