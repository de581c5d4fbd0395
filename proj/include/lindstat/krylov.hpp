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

// Matrix-free Krylov building blocks: restarted GMRES with right
// preconditioning and a generalized Davidson eigensolver for the eigenvalues
// of smallest magnitude of a non-Hermitian operator.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace lindstat::krylov {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;

/// out = Op(in). `out` is resized by the callee.
using LinearOp = std::function<void(const Vector& in, Vector& out)>;
/// out ~= (Op - shift)^{-1} in.
using ShiftedSolve = std::function<void(const Vector& in, cplx shift, Vector& out)>;
/// In-place projection onto the subspace the iteration is confined to.
using Projector = std::function<void(Vector& v)>;

struct GmresOptions {
  int restart = 50;
  int max_iter = 5000;  // total inner iterations
  double tol = 1e-10;   // on ||b - A x|| / ||b||
};

struct GmresResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Solves A x = b starting from x0 with right preconditioner M^{-1}.
/// The true residual is recomputed at every restart and decides convergence.
GmresResult gmres(const LinearOp& a, const LinearOp& precond, const Vector& b, const Vector& x0,
                  const GmresOptions& opt);

struct RitzPair {
  cplx value;
  Vector vector;  // unit 2-norm
  double residual = 0.0;  // ||A x - value x||
};

struct DavidsonOptions {
  int nev = 4;          // wanted eigenvalues closest to zero
  int max_basis = 40;   // search-space size before restart
  int max_iter = 4000;  // expansion steps
  double tol = 1e-10;   // residual tolerance on unit vectors
  int verify_rounds = 3;  // shifted random probes after convergence
  std::uint64_t seed = 1;
};

struct DavidsonResult {
  std::vector<RitzPair> pairs;  // ascending |value|
  int iterations = 0;
  int matvecs = 0;
  bool converged = false;
  double worst_residual = 0.0;
};

/// Generalized Davidson for the `nev` eigenvalues of smallest magnitude of a
/// non-Hermitian operator restricted to the range of `project`.
/// `subspace_dim` bounds the search space (dimension of that range).
DavidsonResult davidson(const LinearOp& a, const ShiftedSolve& precond, const Projector& project,
                        Eigen::Index dim, Eigen::Index subspace_dim, const DavidsonOptions& opt);

}  // namespace lindstat::krylov
