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

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace aest {

using cd = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<cd>;

inline constexpr cd kI{0.0, 1.0};

// Basis convention: a basis index is a bitstring of length N with site 1 as
// the most significant bit; bit value 1 is the excited state |1>.
enum class PauliKind { x, y, z, plus, minus };

inline std::string_view to_string(PauliKind k) {
  switch (k) {
    case PauliKind::x: return "x";
    case PauliKind::y: return "y";
    case PauliKind::z: return "z";
    case PauliKind::plus: return "plus";
    case PauliKind::minus: return "minus";
  }
  return "?";
}

inline std::size_t dimension(int n_sites) {
  if (n_sites < 1 || n_sites > 20) {
    throw std::invalid_argument("number of sites must be in [1, 20], got " +
                                std::to_string(n_sites));
  }
  return std::size_t{1} << n_sites;
}

inline std::size_t site_mask(int site, int n_sites) {
  if (site < 1 || site > n_sites) {
    throw std::invalid_argument("site " + std::to_string(site) +
                                " out of range [1, " + std::to_string(n_sites) +
                                "]");
  }
  return std::size_t{1} << (n_sites - site);
}

namespace detail {

// 2x2 single-spin matrix in the {|0>, |1>} basis, m[row][col].
struct Spin2 {
  cd m[2][2];
};

inline Spin2 spin_matrix(PauliKind k) {
  switch (k) {
    case PauliKind::x: return {{{0.0, 1.0}, {1.0, 0.0}}};
    // sigma_y = i (sigma_- - sigma_+)
    case PauliKind::y: return {{{0.0, kI}, {-kI, 0.0}}};
    case PauliKind::z: return {{{-1.0, 0.0}, {0.0, 1.0}}};
    case PauliKind::plus: return {{{0.0, 0.0}, {1.0, 0.0}}};
    case PauliKind::minus: return {{{0.0, 1.0}, {0.0, 0.0}}};
  }
  return {};
}

inline PauliKind adjoint_kind(PauliKind k) {
  if (k == PauliKind::plus) return PauliKind::minus;
  if (k == PauliKind::minus) return PauliKind::plus;
  return k;
}

}  // namespace detail

/// Dense 2^N operator acting as the chosen Pauli/ladder operator on `site`
/// and as the identity elsewhere.
inline Operator pauli_site(PauliKind kind, int site, int n_sites) {
  const std::size_t dim = dimension(n_sites);
  const std::size_t mask = site_mask(site, n_sites);
  const detail::Spin2 s = detail::spin_matrix(kind);
  Operator out = Operator::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const int b = (col & mask) ? 1 : 0;
    const std::size_t partner = col ^ mask;
    out(col, col) += s.m[b][b];
    out(partner, col) += s.m[1 - b][b];
  }
  return out;
}

/// Nearest-neighbour chain: N sites and N-1 bond couplings J_{i,i+1}.
struct ChainSpec {
  int n_sites = 0;
  std::vector<double> couplings;

  void validate() const {
    if (n_sites < 2) throw std::invalid_argument("chain needs at least 2 sites");
    if (couplings.size() != static_cast<std::size_t>(n_sites - 1)) {
      throw std::invalid_argument("chain of " + std::to_string(n_sites) +
                                  " sites needs " + std::to_string(n_sites - 1) +
                                  " couplings, got " +
                                  std::to_string(couplings.size()));
    }
  }
};

inline ChainSpec uniform_couplings(int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("uniform chain needs N >= 2");
  return {n_sites, std::vector<double>(n_sites - 1, -1.0)};
}

/// Engineered couplings J_i = -sqrt(i (N - i)) giving perfect transfer at
/// t = pi/4 (and odd multiples).
inline ChainSpec pst_couplings(int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("PST chain needs N >= 2");
  ChainSpec spec{n_sites, {}};
  spec.couplings.reserve(n_sites - 1);
  for (int i = 1; i < n_sites; ++i) {
    spec.couplings.push_back(-std::sqrt(static_cast<double>(i) * (n_sites - i)));
  }
  return spec;
}

/// Sparse XY Hamiltonian sum_i J_i (X_i X_{i+1} + Y_i Y_{i+1}). The hopping
/// term flips 01 <-> 10 on each bond with amplitude 2 J_i.
inline SparseOperator build_xy_hamiltonian_sparse(const ChainSpec& spec) {
  spec.validate();
  const std::size_t dim = dimension(spec.n_sites);
  std::vector<Eigen::Triplet<cd>> entries;
  entries.reserve(dim * spec.couplings.size());
  for (int i = 1; i < spec.n_sites; ++i) {
    const double j = spec.couplings[i - 1];
    if (j == 0.0) continue;
    const std::size_t a = site_mask(i, spec.n_sites);
    const std::size_t b = site_mask(i + 1, spec.n_sites);
    for (std::size_t col = 0; col < dim; ++col) {
      const bool ba = col & a;
      const bool bb = col & b;
      if (ba != bb) {
        entries.emplace_back(static_cast<int>(col ^ (a | b)),
                             static_cast<int>(col), cd{2.0 * j, 0.0});
      }
    }
  }
  SparseOperator h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.setFromTriplets(entries.begin(), entries.end());
  h.makeCompressed();
  return h;
}

inline Operator build_xy_hamiltonian(const ChainSpec& spec) {
  return Operator(build_xy_hamiltonian_sparse(spec));
}

/// Total excitation number sum_j (1 + Z_j) / 2 (diagonal).
inline Operator excitation_number(int n_sites) {
  const std::size_t dim = dimension(n_sites);
  Operator out = Operator::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    out(k, k) = static_cast<double>(std::popcount(k));
  }
  return out;
}

inline std::size_t basis_index(const std::vector<int>& excited_sites, int n_sites) {
  std::size_t idx = 0;
  for (int s : excited_sites) idx |= site_mask(s, n_sites);
  return idx;
}

/// Computational basis state with the listed sites excited.
inline StateVector basis_state(const std::vector<int>& excited_sites, int n_sites) {
  StateVector psi = StateVector::Zero(dimension(n_sites));
  psi(basis_index(excited_sites, n_sites)) = 1.0;
  return psi;
}

inline StateVector basis_state(std::initializer_list<int> excited_sites, int n_sites) {
  return basis_state(std::vector<int>(excited_sites), n_sites);
}

/// |1 0 ... 0>: excitation on the first site.
inline StateVector initial_state(int n_sites) { return basis_state({1}, n_sites); }

/// |0 ... 0 1>: excitation on the last site.
inline StateVector target_state(int n_sites) { return basis_state({n_sites}, n_sites); }

/// A single-spin operator, or a sum of identical single-spin operators over
/// several sites, applied to dense matrices in O(d^2) without forming the
/// 2^N x 2^N matrix.
class SiteOperator {
 public:
  SiteOperator(PauliKind kind, std::vector<int> sites, int n_sites)
      : kind_(kind), n_sites_(n_sites) {
    if (sites.empty()) throw std::invalid_argument("site operator needs at least one site");
    for (int s : sites) masks_.push_back(site_mask(s, n_sites));
    sites_ = std::move(sites);
  }

  SiteOperator(PauliKind kind, int site, int n_sites)
      : SiteOperator(kind, std::vector<int>{site}, n_sites) {}

  PauliKind kind() const { return kind_; }
  int n_sites() const { return n_sites_; }
  const std::vector<int>& sites() const { return sites_; }

  SiteOperator adjoint() const {
    return SiteOperator(detail::adjoint_kind(kind_), sites_, n_sites_);
  }

  Operator dense() const {
    Operator out = pauli_site(kind_, sites_.front(), n_sites_);
    for (std::size_t k = 1; k < sites_.size(); ++k) {
      out += pauli_site(kind_, sites_[k], n_sites_);
    }
    return out;
  }

  /// out += scale * (this) * x
  void add_left(Operator& out, cd scale, const Operator& x) const {
    const detail::Spin2 s = detail::spin_matrix(kind_);
    const Eigen::Index dim = x.rows();
    for (std::size_t mask : masks_) {
      cd diag[2] = {scale * s.m[0][0], scale * s.m[1][1]};
      cd off[2] = {scale * s.m[0][1], scale * s.m[1][0]};
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const cd* xc = x.col(c).data();
        cd* oc = out.col(c).data();
        for (Eigen::Index r = 0; r < dim; ++r) {
          const int b = (static_cast<std::size_t>(r) & mask) ? 1 : 0;
          oc[r] += diag[b] * xc[r] + off[b] * xc[static_cast<std::size_t>(r) ^ mask];
        }
      }
    }
  }

  /// out += scale * x * (this)
  void add_right(Operator& out, cd scale, const Operator& x) const {
    const detail::Spin2 s = detail::spin_matrix(kind_);
    for (std::size_t mask : masks_) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const int b = (static_cast<std::size_t>(c) & mask) ? 1 : 0;
        const cd d = scale * s.m[b][b];
        const cd o = scale * s.m[1 - b][b];
        const Eigen::Index partner = static_cast<Eigen::Index>(static_cast<std::size_t>(c) ^ mask);
        if (d != 0.0) out.col(c) += d * x.col(c);
        if (o != 0.0) out.col(c) += o * x.col(partner);
      }
    }
  }

 private:
  PauliKind kind_;
  int n_sites_;
  std::vector<int> sites_;
  std::vector<std::size_t> masks_;
};

/// Entrywise max |A - A^dagger|.
inline double hermiticity_error(const Operator& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace aest
