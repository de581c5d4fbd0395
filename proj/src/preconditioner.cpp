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

#include "lindstat/preconditioner.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace lindstat {

namespace {

using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Guards divisions by (lambda_a + conj(lambda_b) - shift) near zero.
cplx safe_denominator(cplx d, double floor) {
  if (std::abs(d) >= floor) return d;
  if (d == cplx{}) return cplx{-floor, 0.0};
  return d / std::abs(d) * floor;
}

}  // namespace

BlockSylvesterPreconditioner::BlockSylvesterPreconditioner(const LindbladTerms& terms,
                                                           const SectorBasis& basis) {
  const cplx i{0.0, 1.0};
  const SparseMatrix decay = terms.decay_operator();
  const SparseMatrix& h = terms.hamiltonian;
  double norm_a = 0.0;

  for (int z = 0; z <= basis.sites(); ++z) {
    const auto& st = basis.states(z);
    const auto d = static_cast<Eigen::Index>(st.size());
    DenseMatrix a(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) a(r, c) = -i * h.coeff(st[r], st[c]) - decay.coeff(st[r], st[c]);
    }
    norm_a = std::max(norm_a, a.norm());

    Block b;
    b.offset = static_cast<Eigen::Index>(basis.block_offset(z));
    b.dim = d;
    Eigen::ComplexEigenSolver<DenseMatrix> es(a, true);
    bool ok = es.info() == Eigen::Success;
    if (ok) {
      b.v = es.eigenvectors();
      b.lambda = es.eigenvalues();
      Eigen::PartialPivLU<DenseMatrix> lu(b.v);
      b.v_inv = lu.inverse();
      const double recon = (b.v * b.v_inv - DenseMatrix::Identity(d, d)).norm();
      ok = std::isfinite(recon) && recon < 1e-8 * std::sqrt(static_cast<double>(d));
    }
    if (!ok) {
      // Nearly defective block: fall back to a triangular Sylvester solve.
      Eigen::ComplexSchur<DenseMatrix> schur(a);
      b.use_schur = true;
      b.q = schur.matrixU();
      b.t = schur.matrixT();
      b.v.resize(0, 0);
      b.v_inv.resize(0, 0);
    }
    blocks_.push_back(std::move(b));
  }
  scale_ = std::max(norm_a, 1.0);
}

int BlockSylvesterPreconditioner::schur_blocks() const {
  int count = 0;
  for (const auto& b : blocks_) count += b.use_schur ? 1 : 0;
  return count;
}

void BlockSylvesterPreconditioner::solve_block(const Block& b, const DenseMatrix& rhs, cplx shift,
                                               DenseMatrix& out) const {
  const double floor = 1e-10 * scale_;
  const Eigen::Index d = b.dim;
  if (!b.use_schur) {
    DenseMatrix y = b.v_inv * rhs * b.v_inv.adjoint();
    for (Eigen::Index col = 0; col < d; ++col) {
      for (Eigen::Index row = 0; row < d; ++row) {
        y(row, col) /= safe_denominator(b.lambda[row] + std::conj(b.lambda[col]) - shift, floor);
      }
    }
    out.noalias() = b.v * y * b.v.adjoint();
    return;
  }
  // T Y + Y T^dagger - shift Y = C with T upper triangular; columns of Y are
  // resolved from the last to the first.
  const DenseMatrix c = b.q.adjoint() * rhs * b.q;
  DenseMatrix y = DenseMatrix::Zero(d, d);
  DenseMatrix shifted = b.t;
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    Eigen::VectorXcd col = c.col(j);
    for (Eigen::Index k = j + 1; k < d; ++k) col -= std::conj(b.t(j, k)) * y.col(k);
    const cplx diag_shift = std::conj(b.t(j, j)) - shift;
    for (Eigen::Index k = 0; k < d; ++k) {
      shifted(k, k) = safe_denominator(b.t(k, k) + diag_shift, floor);
    }
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(col);
  }
  out.noalias() = b.q * y * b.q.adjoint();
}

void BlockSylvesterPreconditioner::solve(const Eigen::VectorXcd& r, cplx shift,
                                         Eigen::VectorXcd& x) const {
  x.resize(r.size());
  DenseMatrix out;
  for (const auto& b : blocks_) {
    const DenseMatrix rhs = Eigen::Map<const RowMajorMatrix>(r.data() + b.offset, b.dim, b.dim);
    solve_block(b, rhs, shift, out);
    Eigen::Map<RowMajorMatrix>(x.data() + b.offset, b.dim, b.dim) = out;
  }
}

}  // namespace lindstat
