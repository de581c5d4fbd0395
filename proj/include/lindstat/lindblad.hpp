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

// Lindblad generators for boundary-driven spin chains and their restriction to
// the zero magnetization-difference sector of operator space.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lindstat/spinops.hpp"

namespace lindstat {

/// Boundary driving and bulk dephasing parameters.
struct BathSpec {
  double gamma_drive = 1.0;  // coupling Gamma > 0
  double mu = 0.0;           // driving strength
  double mu_bar = 0.0;       // mean-magnetization bias
  double gamma_deph = 0.0;   // dephasing strength >= 0

  /// Throws ArgumentError naming the violated inequality.
  void validate() const;
  /// Rates Gamma(1-mu+mu_bar), Gamma(1+mu-mu_bar), Gamma(1+mu+mu_bar),
  /// Gamma(1-mu-mu_bar) of the left raising, left lowering, right raising and
  /// right lowering jumps.
  std::array<double, 4> driving_rates() const;
};

struct ChainModel {
  ChainSpec chain;
  BathSpec bath;

  void validate() const {
    chain.validate();
    bath.validate();
  }
  int sites() const { return chain.n; }
};

/// Hamiltonian plus jump operators; the generic input of every Liouvillian.
struct LindbladTerms {
  int n = 0;
  SparseMatrix hamiltonian;
  std::vector<SparseMatrix> jumps;

  /// Sum of L^dagger L over all jumps.
  SparseMatrix decay_operator() const;
};

/// Driving jumps with nonzero rate (in the order L1..L4) followed by the n
/// dephasing jumps sqrt(gamma/2) sigma^z_j when gamma > 0.
std::vector<SparseMatrix> build_jump_operators(const ChainModel& model);

LindbladTerms build_lindblad_terms(const ChainModel& model);

/// Matrix-free action of the Liouvillian on full 2^n x 2^n operators.
class Liouvillian {
 public:
  explicit Liouvillian(LindbladTerms terms);
  explicit Liouvillian(const ChainModel& model);

  DenseMatrix apply(const DenseMatrix& rho) const;
  const LindbladTerms& terms() const { return terms_; }
  int sites() const { return terms_.n; }

 private:
  LindbladTerms terms_;
  std::vector<SparseMatrix> jumps_adj_;
  SparseMatrix decay_;
};

/// -i[H, rho] + sum_mu 2 L rho L^dagger - {L^dagger L, rho}.
DenseMatrix apply_liouvillian(const ChainModel& model, const DenseMatrix& rho);

/// Basis of operators |i><j| whose bra and ket carry the same up-spin count.
///
/// Blocks are ordered by up-spin count 0..n. Inside a block the pair (i, j)
/// is enumerated lexicographically over the ascending list of block states,
/// so the coefficient vector of a block is the row-major flattening of the
/// corresponding C(n, n_up) x C(n, n_up) sub-matrix.
class SectorBasis {
 public:
  explicit SectorBasis(int n);

  int sites() const { return n_; }
  std::size_t size() const { return offsets_.back(); }
  std::uint32_t block_dim(int n_up) const;
  std::size_t block_offset(int n_up) const;
  /// n + 2 entries; entry k is the first index of block k, the last is size().
  const std::vector<std::size_t>& block_offsets() const { return offsets_; }
  const std::vector<std::uint32_t>& states(int n_up) const;
  /// Position of a basis state inside the list of its block.
  std::uint32_t rank(std::uint32_t state) const { return rank_[state]; }
  int up(std::uint32_t state) const { return up_[state]; }

  /// Coefficient index of |i><j|; ArgumentError if up(i) != up(j).
  std::size_t index(std::uint32_t i, std::uint32_t j) const;
  std::pair<std::uint32_t, std::uint32_t> pair(std::size_t index) const;
  /// All labels in coefficient order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs() const;

  /// Coefficients of the diagonal entries |i><i|, the trace functional.
  Eigen::VectorXcd trace_vector() const;

  DenseMatrix embed(const Eigen::VectorXcd& coeffs) const;
  /// Sector coefficients of a full operator; entries outside the sector are
  /// dropped and their Frobenius norm is written to `leakage` when non-null.
  Eigen::VectorXcd restrict(const DenseMatrix& rho, double* leakage = nullptr) const;

  /// Block of the operator with the given up count, as a dense matrix.
  DenseMatrix block(const Eigen::VectorXcd& coeffs, int n_up) const;

 private:
  void check_up(int n_up) const;

  int n_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::uint32_t>> states_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::uint8_t> up_;
};

/// Liouvillian restricted to the sector, acting on coefficient vectors.
SparseMatrix build_superoperator_sector(const LindbladTerms& terms,
                                        const SectorBasis& basis);
SparseMatrix build_superoperator_sector(const ChainModel& model,
                                        const SectorBasis& basis);

/// Probes U L(rho) U^dagger == L(U rho U^dagger) on `trials` seeded random
/// Hermitian rho, relative to ||L(rho)||.
bool check_weak_symmetry(const ChainModel& model, const SparseMatrix& u,
                         int trials, double tol, std::uint64_t seed = 20130514);

/// Random Hermitian matrix with Gaussian entries.
DenseMatrix random_hermitian(int dim, std::uint64_t seed);

/// Dense block of a sector operator with the given up count.
DenseMatrix magnetization_block(const SectorBasis& basis,
                                const Eigen::VectorXcd& coeffs, int n_up);

}  // namespace lindstat
