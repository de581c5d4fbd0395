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

// Steady states and Hermitian decay modes of sector Liouvillians, plus the
// dense spectra of their fixed-magnetization blocks.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lindstat/errors.hpp"
#include "lindstat/krylov.hpp"
#include "lindstat/lindblad.hpp"
#include "lindstat/preconditioner.hpp"

namespace lindstat {

enum class ModeKind { kNess, kHdm };

const char* to_string(ModeKind kind);

/// Operator in the zero magnetization-difference sector together with its
/// Liouvillian eigenvalue. A NESS has unit trace and eigenvalue 0; a decay
/// mode is traceless with unit Frobenius norm and a real negative eigenvalue.
struct DensityOperator {
  std::shared_ptr<const SectorBasis> basis;
  Eigen::VectorXcd coefficients;
  cplx lambda{0.0, 0.0};
  ModeKind kind = ModeKind::kNess;
  double residual = 0.0;  // ||L rho - lambda rho|| / ||rho||

  int sites() const { return basis->sites(); }
  cplx trace() const;
  DenseMatrix block(int n_up) const { return basis->block(coefficients, n_up); }
  DenseMatrix to_full() const { return basis->embed(coefficients); }
};

/// Error raised when fewer decay modes than requested qualify.
struct PartialResultError : Error {
  PartialResultError(const std::string& what, std::vector<DensityOperator> found)
      : Error(ErrorCode::kPartialResult, what), found(std::move(found)) {}
  std::vector<DensityOperator> found;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  int gmres_restart = 50;
  /// Solve twice with independent bordering vectors and compare; catches a
  /// degenerate steady state at the cost of a second solve.
  bool check_uniqueness = true;
  std::uint64_t seed = 7;
};

/// Eigenvalues closer than this to the imaginary axis count as real.
inline constexpr double kRealnessTol = 1e-9;
/// Minimum distance of a qualifying decay eigenvalue from its neighbours.
inline constexpr double kSeparationTol = 1e-9;
/// Sectors up to this traceless dimension are searched in full for decay modes.
inline constexpr long kFullSectorDim = 400;

/// Assembled sector Liouvillian with its block preconditioner.
class SectorProblem {
 public:
  explicit SectorProblem(const ChainModel& model);
  explicit SectorProblem(LindbladTerms terms);

  const SectorBasis& basis() const { return *basis_; }
  std::shared_ptr<const SectorBasis> basis_ptr() const { return basis_; }
  const SparseMatrix& matrix() const { return matrix_; }
  const BlockSylvesterPreconditioner& preconditioner() const { return precond_; }
  int sites() const { return basis_->sites(); }

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  DensityOperator ness(const SolverOptions& opt) const;
  std::vector<DensityOperator> decay_modes(int k, const SolverOptions& opt) const;

 private:
  Eigen::VectorXcd solve_bordered(const Eigen::VectorXcd& border, const SolverOptions& opt) const;
  DensityOperator make_ness(const Eigen::VectorXcd& raw) const;
  std::vector<krylov::RitzPair> dense_sector_pairs() const;

  std::shared_ptr<const SectorBasis> basis_;
  SparseMatrix matrix_;
  BlockSylvesterPreconditioner precond_;
  Eigen::VectorXcd trace_;
};

DensityOperator find_ness(const ChainModel& model, double tol = 1e-10, int max_iter = 20000);
std::vector<DensityOperator> find_decay_modes(const ChainModel& model, int k, double tol = 1e-10,
                                              int max_iter = 20000);

/// Steady state from the dense SVD kernel of the sector matrix (n <= 5).
DensityOperator dense_null_space_oracle(const ChainModel& model);
DensityOperator dense_null_space_oracle(const LindbladTerms& terms);

/// (rho + rho^dagger) / 2 in sector coefficients.
Eigen::VectorXcd hermitize(const SectorBasis& basis, const Eigen::VectorXcd& coeffs);

/// Half the trace norm of the difference; both operators must share a basis.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

struct SpectrumSource {
  std::string model_id;
  int n_up = 0;
  ModeKind kind = ModeKind::kNess;
  int mode_index = 0;  // 0 for the NESS, m >= 1 for decay modes
};

/// Ascending eigenvalues of one block, with numerical zeros removed.
struct Spectrum {
  std::vector<double> values;
  std::size_t discarded_count = 0;
  /// Adjacent values equal to within 1e-12 of the largest magnitude.
  std::size_t degenerate_pairs = 0;
  SpectrumSource source;
};

/// Eigenvalues with |x| < zero_cutoff * max|x| are counted, not kept.
Spectrum block_spectrum(const DensityOperator& rho, int n_up, double zero_cutoff = 1e-12);

/// Eigenvalues of a Hermitian matrix in ascending order.
std::vector<double> hermitian_eigenvalues(const DenseMatrix& m);

}  // namespace lindstat
