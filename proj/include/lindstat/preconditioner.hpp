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

#include <vector>

#include "lindstat/lindblad.hpp"

namespace lindstat {

/// Block-diagonal approximation of a sector Liouvillian.
///
/// Within the block of up count N the coherent part and the anticommutator
/// part of the dissipator act as rho -> A rho + rho A^dagger with
/// A = (-iH - K) restricted to the block. Jump terms that move weight between
/// blocks or act as sandwiches inside a block are dropped. The shifted
/// equation A rho + rho A^dagger - s rho = R is then a Sylvester equation
/// solved exactly per block.
class BlockSylvesterPreconditioner {
 public:
  BlockSylvesterPreconditioner(const LindbladTerms& terms, const SectorBasis& basis);

  /// x = (P - shift)^{-1} r. `x` may not alias `r`.
  void solve(const Eigen::VectorXcd& r, cplx shift, Eigen::VectorXcd& x) const;

  /// Number of blocks that fell back to the Schur solver.
  int schur_blocks() const;

 private:
  struct Block {
    Eigen::Index offset = 0;
    Eigen::Index dim = 0;
    bool use_schur = false;
    // A = V diag(lambda) V^{-1}
    DenseMatrix v, v_inv;
    Eigen::VectorXcd lambda;
    // A = Q T Q^dagger
    DenseMatrix q, t;
  };

  void solve_block(const Block& b, const DenseMatrix& rhs, cplx shift, DenseMatrix& out) const;

  std::vector<Block> blocks_;
  double scale_ = 1.0;
};

}  // namespace lindstat
