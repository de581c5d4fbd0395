// Copyright 2026 The lindstat Authors
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

// Pauli algebra on spin-1/2 chains and the sparse matrix type used throughout.
//
// Basis convention: the computational basis index of a chain of n sites stores
// site 1 in the most significant bit and site n in the least significant bit.
// A clear bit is spin up, a set bit is spin down, so state 0 is all-up and the
// single-site basis order is (up, down).

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lindstat {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;

/// Largest chain the library will enumerate (2^n basis states must fit int).
inline constexpr int kMaxSites = 24;

enum class SiteOp { X, Y, Z, Plus, Minus, Identity };

struct ChainSpec {
  int n = 2;
  double delta = 0.0;
  std::vector<double> field;  // b_1..b_n

  /// Chain with zero field.
  static ChainSpec uniform(int n, double delta);
  /// Throws ArgumentError when n < 2 or field.size() != n.
  void validate() const;
};

inline std::uint32_t hilbert_dim(int n) { return std::uint32_t{1} << n; }

/// Number of up spins in a computational basis state.
int up_count(std::uint32_t state, int n);

/// 2x2 matrix of a single-site operator in the (up, down) basis.
Eigen::Matrix2cd single_site_matrix(SiteOp kind);

/// `kind` acting on `site` (1-based), identity elsewhere.
SparseMatrix site_operator(SiteOp kind, int site, int n);

SparseMatrix identity_operator(int n);

/// XXZ Hamiltonian with nearest-neighbour exchange and on-site z fields.
SparseMatrix build_hamiltonian(const ChainSpec& spec);

/// Period-3 staggered field; site s receives -1, -1/2, 0 for s mod 3 = 1, 2, 0.
std::vector<double> staggered_field(int n);

/// Diagonal operator counting up spins.
SparseMatrix total_up_count_operator(int n);

/// exp(-i alpha N_up), the U(1) rotation generated by the up-spin count.
SparseMatrix magnetization_rotation(int n, double alpha);

/// Spin flip on every site composed with left-right reflection.
SparseMatrix parity_operator(int n);

/// Unitary factor of the antiunitary symmetry: sigma^z on every even site.
/// Complex conjugation in the computational basis is left to the caller.
SparseMatrix antiunitary_conjugator(int n);

DenseMatrix to_dense(const SparseMatrix& m);

/// Frobenius norm of a sparse matrix.
double frobenius_norm(const SparseMatrix& m);

/// Exact structural equality: same shape, same nonzero pattern, same values.
/// Explicit zeros are ignored.
bool structurally_equal(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace lindstat
