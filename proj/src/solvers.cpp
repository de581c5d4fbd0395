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

#include "lindstat/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lindstat/krylov.hpp"

namespace lindstat {

const char* to_string(ModeKind kind) { return kind == ModeKind::kNess ? "ness" : "hdm"; }

cplx DensityOperator::trace() const { return basis->trace_vector().dot(coefficients); }

Eigen::VectorXcd hermitize(const SectorBasis& basis, const Eigen::VectorXcd& coeffs) {
  Eigen::VectorXcd out(coeffs.size());
  for (int z = 0; z <= basis.sites(); ++z) {
    const std::size_t off = basis.block_offset(z);
    const std::size_t d = basis.block_dim(z);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        const auto p = static_cast<Eigen::Index>(off + a * d + b);
        const auto q = static_cast<Eigen::Index>(off + b * d + a);
        out[p] = 0.5 * (coeffs[p] + std::conj(coeffs[q]));
      }
    }
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const DenseMatrix& m) {
  const DenseMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.basis->sites() != b.basis->sites() || a.coefficients.size() != b.coefficients.size()) {
    throw ArgumentError("trace distance between operators on different chains");
  }
  const Eigen::VectorXcd diff = a.coefficients - b.coefficients;
  double sum = 0.0;
  // Sector operators are block diagonal in the up-spin count.
  for (int z = 0; z <= a.sites(); ++z) {
    for (double x : hermitian_eigenvalues(a.basis->block(diff, z))) sum += std::abs(x);
  }
  return 0.5 * sum;
}

// ---------------------------------------------------------------------------

namespace {

LindbladTerms checked_terms(const ChainModel& model) { return build_lindblad_terms(model); }

}  // namespace

SectorProblem::SectorProblem(const ChainModel& model) : SectorProblem(checked_terms(model)) {}

SectorProblem::SectorProblem(LindbladTerms terms)
    : basis_(std::make_shared<const SectorBasis>(terms.n)),
      matrix_(build_superoperator_sector(terms, *basis_)),
      precond_(terms, *basis_),
      trace_(basis_->trace_vector()) {}

void SectorProblem::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out.noalias() = matrix_ * in;
}

Eigen::VectorXcd SectorProblem::solve_bordered(const Eigen::VectorXcd& border,
                                               const SolverOptions& opt) const {
  // (L + border trace^T) x = border has the unit-trace steady state as its
  // unique solution whenever the steady state is unique.
  krylov::LinearOp op = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    out.noalias() = matrix_ * in;
    out += border * trace_.dot(in);
  };
  krylov::LinearOp pre = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    precond_.solve(in, cplx{0.0, 0.0}, out);
  };
  krylov::GmresOptions gopt;
  gopt.restart = opt.gmres_restart;
  gopt.max_iter = opt.max_iter;
  gopt.tol = 0.25 * opt.tol;
  const auto res = krylov::gmres(op, pre, border, Eigen::VectorXcd::Zero(border.size()), gopt);
  if (!res.converged) {
    std::ostringstream os;
    os << "steady-state solve did not converge in " << res.iterations
       << " iterations (relative residual " << res.relative_residual << ")";
    throw ConvergenceError(os.str(), res.relative_residual);
  }
  return res.x;
}

DensityOperator SectorProblem::make_ness(const Eigen::VectorXcd& raw) const {
  DensityOperator rho;
  rho.basis = basis_;
  rho.kind = ModeKind::kNess;
  rho.coefficients = hermitize(*basis_, raw);
  const cplx tr = trace_.dot(rho.coefficients);
  rho.coefficients /= tr.real();
  Eigen::VectorXcd lr;
  apply(rho.coefficients, lr);
  rho.residual = lr.norm() / rho.coefficients.norm();
  return rho;
}

DensityOperator SectorProblem::ness(const SolverOptions& opt) const {
  if (!(opt.tol > 0.0)) throw ArgumentError("tolerance must be positive");
  const Eigen::VectorXcd border = trace_ / trace_.squaredNorm();
  DensityOperator rho = make_ness(solve_bordered(border, opt));
  if (rho.residual >= opt.tol) {
    std::ostringstream os;
    os << "steady state residual " << rho.residual << " above tolerance " << opt.tol;
    throw ConvergenceError(os.str(), rho.residual);
  }
  if (opt.check_uniqueness) {
    // A second bordering vector selects a different element of the kernel
    // when the steady state is not unique.
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    Eigen::VectorXcd alt(trace_.size());
    for (Eigen::Index k = 0; k < alt.size(); ++k) alt[k] = trace_[k].real() * u(rng);
    alt /= trace_.dot(alt).real();
    const DensityOperator other = make_ness(solve_bordered(alt, opt));
    const double dist = trace_distance(rho, other);
    if (dist > std::max(1e-6, 1e3 * opt.tol)) {
      std::ostringstream os;
      os << "steady state is degenerate: independent solves differ by trace distance " << dist;
      throw DegeneracyError(os.str());
    }
  }
  return rho;
}

std::vector<krylov::RitzPair> SectorProblem::dense_sector_pairs() const {
  const auto dim = static_cast<Eigen::Index>(basis_->size());
  Eigen::MatrixXcd l(dim, dim);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim), col;
  for (Eigen::Index j = 0; j < dim; ++j) {
    e[j] = 1.0;
    apply(e, col);
    l.col(j) = col;
    e[j] = 0.0;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l, true);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense sector diagonalization failed", 0.0);
  // Drop the steady-state eigenvalue; a second zero means a degenerate kernel.
  Eigen::Index zero = 0;
  for (Eigen::Index i = 1; i < dim; ++i) {
    if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[zero])) zero = i;
  }
  std::vector<krylov::RitzPair> pairs;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i == zero) continue;
    krylov::RitzPair p;
    p.value = es.eigenvalues()[i];
    p.vector = es.eigenvectors().col(i).normalized();
    p.residual = 0.0;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<DensityOperator> SectorProblem::decay_modes(int k, const SolverOptions& opt) const {
  if (k < 1) throw ArgumentError("number of decay modes must be >= 1");
  const auto dim = static_cast<Eigen::Index>(basis_->size());
  const Eigen::Index traceless_dim = dim - 1;
  if (traceless_dim < 1) throw ArgumentError("sector too small for decay modes");
  const Eigen::VectorXcd unit_trace = trace_ / trace_.norm();

  krylov::LinearOp op = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { apply(in, out); };
  krylov::ShiftedSolve pre = [&](const Eigen::VectorXcd& in, cplx shift, Eigen::VectorXcd& out) {
    precond_.solve(in, shift, out);
  };
  krylov::Projector traceless = [&](Eigen::VectorXcd& v) { v -= unit_trace * unit_trace.dot(v); };

  const bool small = traceless_dim <= kFullSectorDim;
  const Eigen::Index cap = small ? traceless_dim
                                 : std::min<Eigen::Index>(std::max(40, 6 * k), traceless_dim);
  Eigen::Index nev = small ? traceless_dim : std::min<Eigen::Index>(k + 3, cap);
  std::vector<DensityOperator> found;
  while (true) {
    std::vector<krylov::RitzPair> pairs;
    if (small) {
      pairs = dense_sector_pairs();
    } else {
      krylov::DavidsonOptions dopt;
      dopt.nev = static_cast<int>(nev);
      dopt.max_basis = static_cast<int>(std::max<Eigen::Index>(40, nev + 20));
      dopt.max_iter = opt.max_iter;
      dopt.tol = opt.tol;
      dopt.seed = opt.seed;
      auto res = krylov::davidson(op, pre, traceless, dim, traceless_dim, dopt);
      if (!res.converged) {
        std::ostringstream os;
        os << "decay-mode iteration did not converge after " << res.iterations
           << " steps (worst residual " << res.worst_residual << ")";
        throw ConvergenceError(os.str(), res.worst_residual);
      }
      pairs = std::move(res.pairs);
    }

    found.clear();
    // Pairs at the window edge may have partners just outside it.
    double edge = 0.0;
    for (const auto& p : pairs) edge = std::max(edge, std::abs(p.value));
    const bool complete = nev >= traceless_dim;
    std::vector<const krylov::RitzPair*> qualifying;
    for (const auto& p : pairs) {
      if (std::abs(p.value) < 1e-10) {
        throw DegeneracyError("a traceless steady state exists; the steady state is degenerate");
      }
      if (std::abs(p.value.imag()) >= kRealnessTol || p.value.real() >= 0.0) continue;
      if (!complete && std::abs(p.value) >= edge - kSeparationTol) continue;
      bool isolated = true;
      for (const auto& q : pairs) {
        if (&q != &p && std::abs(q.value - p.value) <= kSeparationTol) isolated = false;
      }
      if (isolated) qualifying.push_back(&p);
    }
    std::sort(qualifying.begin(), qualifying.end(),
              [](const auto* a, const auto* b) { return a->value.real() > b->value.real(); });

    for (const auto* p : qualifying) {
      if (static_cast<int>(found.size()) == k) break;
      Eigen::VectorXcd x = p->vector;
      // Phase: largest-magnitude diagonal entry made real and positive.
      Eigen::Index best = 0;
      double best_abs = -1.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (trace_[i] != cplx{} && std::abs(x[i]) > best_abs) {
          best_abs = std::abs(x[i]);
          best = i;
        }
      }
      if (best_abs > 0.0) x *= std::conj(x[best]) / best_abs;
      DensityOperator mode;
      mode.basis = basis_;
      mode.kind = ModeKind::kHdm;
      mode.coefficients = hermitize(*basis_, x);
      mode.coefficients.normalize();
      mode.lambda = cplx{p->value.real(), 0.0};
      Eigen::VectorXcd lr;
      apply(mode.coefficients, lr);
      mode.residual = (lr - mode.lambda.real() * mode.coefficients).norm();
      found.push_back(std::move(mode));
    }
    if (static_cast<int>(found.size()) >= k) return found;
    if (nev >= cap) break;
    nev = std::min(cap, 2 * nev);
  }
  std::ostringstream os;
  os << "found " << found.size() << " of " << k << " real nondegenerate decay modes";
  for (const auto& m : found) os << " [lambda=" << m.lambda.real() << "]";
  throw PartialResultError(os.str(), std::move(found));
}

DensityOperator find_ness(const ChainModel& model, double tol, int max_iter) {
  SolverOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return SectorProblem(model).ness(opt);
}

std::vector<DensityOperator> find_decay_modes(const ChainModel& model, int k, double tol,
                                              int max_iter) {
  SolverOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return SectorProblem(model).decay_modes(k, opt);
}

DensityOperator dense_null_space_oracle(const ChainModel& model) {
  return dense_null_space_oracle(build_lindblad_terms(model));
}

DensityOperator dense_null_space_oracle(const LindbladTerms& terms) {
  if (terms.n > 5) throw ArgumentError("dense oracle limited to n <= 5");
  auto basis = std::make_shared<const SectorBasis>(terms.n);
  const DenseMatrix m(build_superoperator_sector(terms, *basis));
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double floor = 1e-9 * std::max(1.0, sv[0]);
  int kernel = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) kernel += sv[i] < floor ? 1 : 0;
  if (kernel != 1) {
    throw DegeneracyError("dense kernel has dimension " + std::to_string(kernel));
  }
  DensityOperator rho;
  rho.basis = basis;
  rho.kind = ModeKind::kNess;
  const Eigen::VectorXcd t = basis->trace_vector();
  // The kernel vector carries an arbitrary phase; fix it through the trace.
  const Eigen::VectorXcd raw = svd.matrixV().col(sv.size() - 1);
  const cplx tr = t.dot(raw);
  rho.coefficients = hermitize(*basis, raw / tr);
  rho.coefficients /= t.dot(rho.coefficients).real();
  rho.residual = (m * rho.coefficients).norm() / rho.coefficients.norm();
  return rho;
}

Spectrum block_spectrum(const DensityOperator& rho, int n_up, double zero_cutoff) {
  const std::vector<double> all = hermitian_eigenvalues(rho.block(n_up));
  Spectrum s;
  s.source.n_up = n_up;
  s.source.kind = rho.kind;
  double largest = 0.0;
  for (double x : all) largest = std::max(largest, std::abs(x));
  for (double x : all) {
    if (largest > 0.0 && std::abs(x) >= zero_cutoff * largest) {
      s.values.push_back(x);
    } else {
      ++s.discarded_count;
    }
  }
  if (s.values.empty()) {
    throw EmptySpectrumError("block n_up=" + std::to_string(n_up) +
                             " has no eigenvalues above the zero cutoff");
  }
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    if (s.values[i] - s.values[i - 1] <= 1e-12 * largest) ++s.degenerate_pairs;
  }
  return s;
}

}  // namespace lindstat
