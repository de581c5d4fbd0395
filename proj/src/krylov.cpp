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

#include "lindstat/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace lindstat::krylov {

namespace {

using Matrix = Eigen::MatrixXcd;

// Rotation G = [c s; -conj(s) c] that zeroes b in (a, b)^T.
struct Givens {
  double c = 1.0;
  cplx s{0.0, 0.0};

  static Givens zeroing(cplx a, cplx b) {
    Givens g;
    if (b == cplx{}) return g;
    if (a == cplx{}) {
      g.c = 0.0;
      g.s = std::conj(b) / std::abs(b);
      return g;
    }
    const double abs_a = std::abs(a);
    const double norm = std::hypot(abs_a, std::abs(b));
    g.c = abs_a / norm;
    g.s = (a / abs_a) * std::conj(b) / norm;
    return g;
  }

  void apply(cplx& x, cplx& y) const {
    const cplx tx = g_c() * x + s * y;
    y = -std::conj(s) * x + g_c() * y;
    x = tx;
  }

 private:
  cplx g_c() const { return cplx{c, 0.0}; }
};

Vector random_unit(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = cplx{g(rng), g(rng)};
  return v;
}

}  // namespace

GmresResult gmres(const LinearOp& a, const LinearOp& precond, const Vector& b, const Vector& x0,
                  const GmresOptions& opt) {
  GmresResult res;
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  res.x = x0.size() == n ? x0 : Vector::Zero(n);
  if (bnorm == 0.0) {
    res.x.setZero();
    res.converged = true;
    return res;
  }
  const int m = std::max(1, opt.restart);
  Matrix basis(n, m + 1);
  Matrix hess = Matrix::Zero(m + 1, m);
  std::vector<Givens> rot(m);
  Vector g(m + 1);
  Vector r, z, w;

  while (true) {
    a(res.x, w);
    r = b - w;
    const double beta = r.norm();
    res.relative_residual = beta / bnorm;
    if (res.relative_residual < opt.tol) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= opt.max_iter) return res;

    basis.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    hess.setZero();
    int k = 0;
    for (int j = 0; j < m && res.iterations < opt.max_iter; ++j) {
      precond(basis.col(j), z);
      a(z, w);
      ++res.iterations;
      // Modified Gram-Schmidt with one reorthogonalisation pass.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const cplx h = basis.col(i).dot(w);
          hess(i, j) += h;
          w -= h * basis.col(i);
        }
      }
      const double hnext = w.norm();
      hess(j + 1, j) = hnext;
      if (hnext > 0.0) basis.col(j + 1) = w / hnext;

      for (int i = 0; i < j; ++i) rot[i].apply(hess(i, j), hess(i + 1, j));
      rot[j] = Givens::zeroing(hess(j, j), hess(j + 1, j));
      rot[j].apply(hess(j, j), hess(j + 1, j));
      rot[j].apply(g[j], g[j + 1]);
      k = j + 1;
      // Leave a margin for the gap between the recursive and true residual.
      if (std::abs(g[j + 1]) < 0.5 * opt.tol * bnorm || hnext == 0.0) break;
    }
    const Vector y = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    const Vector update = basis.leftCols(k) * y;
    precond(update, z);
    res.x += z;
  }
}

DavidsonResult davidson(const LinearOp& a, const ShiftedSolve& precond, const Projector& project,
                        Eigen::Index dim, Eigen::Index subspace_dim, const DavidsonOptions& opt) {
  DavidsonResult out;
  const Eigen::Index nev = std::clamp<Eigen::Index>(opt.nev, 1, subspace_dim);
  const Eigen::Index max_basis =
      std::min<Eigen::Index>(std::max<Eigen::Index>(opt.max_basis, nev + 8), subspace_dim);
  const Eigen::Index keep = std::min<Eigen::Index>(max_basis - 1, nev + 6);

  std::mt19937_64 rng(opt.seed);
  Matrix v(dim, max_basis), w(dim, max_basis);
  Matrix g(max_basis, max_basis);
  Eigen::Index size = 0;

  Vector t = random_unit(dim, rng);
  Vector av;
  Eigen::VectorXcd theta;
  Matrix y;
  std::vector<Eigen::Index> order;
  std::vector<cplx> previous;
  int probes = 0;

  auto add_vector = [&](Vector cand) -> bool {
    if (size >= max_basis) return false;
    project(cand);
    const double before = cand.norm();
    if (before == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (size > 0) cand -= v.leftCols(size) * (v.leftCols(size).adjoint() * cand);
      project(cand);
    }
    const double after = cand.norm();
    if (after < 1e-10 * before) return false;
    v.col(size) = cand / after;
    a(v.col(size), av);
    project(av);
    w.col(size) = av;
    ++out.matvecs;
    g.block(0, size, size + 1, 1) = v.leftCols(size + 1).adjoint() * w.col(size);
    g.block(size, 0, 1, size) = v.col(size).adjoint() * w.leftCols(size);
    ++size;
    return true;
  };

  while (out.iterations < opt.max_iter) {
    if (!add_vector(t)) {
      if (size >= subspace_dim) break;
      // Stagnated correction: expand with a fresh random direction.
      if (!add_vector(random_unit(dim, rng)) && size == 0) break;
    }
    ++out.iterations;

    Eigen::ComplexEigenSolver<Matrix> es(g.topLeftCorner(size, size), true);
    theta = es.eigenvalues();
    y = es.eigenvectors();
    order.resize(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
      const double ap = std::abs(theta[p]), aq = std::abs(theta[q]);
      if (ap != aq) return ap < aq;
      return theta[p].real() > theta[q].real();
    });

    // First wanted Ritz pair that has not converged.
    Eigen::Index target = -1;
    Vector residual;
    const Eigen::Index wanted = std::min(nev, size);
    for (Eigen::Index p = 0; p < wanted; ++p) {
      const Eigen::Index idx = order[static_cast<std::size_t>(p)];
      const Vector yy = y.col(idx).normalized();
      Vector r = w.leftCols(size) * yy - theta[idx] * (v.leftCols(size) * yy);
      if (r.norm() > opt.tol) {
        target = idx;
        residual = std::move(r);
        break;
      }
    }
    if (target < 0 && size >= nev) {
      // Probe for missed partners: preconditioned random vectors shifted to each
      // converged value. Accept once the wanted set is stable.
      std::vector<cplx> current;
      for (Eigen::Index p = 0; p < nev; ++p) current.push_back(theta[order[static_cast<std::size_t>(p)]]);
      bool stable = !previous.empty() && previous.size() == current.size();
      for (std::size_t p = 0; stable && p < current.size(); ++p)
        stable = std::abs(current[p] - previous[p]) <= 1e-8 * (1.0 + std::abs(current[p]));
      if (stable || probes >= opt.verify_rounds || size >= subspace_dim) {
        out.converged = true;
        break;
      }
      previous = std::move(current);
      ++probes;
      const Eigen::Index room = std::min<Eigen::Index>(nev, 8);
      if (size + room > max_basis) {
        const Eigen::Index k2 = std::min<Eigen::Index>(size, std::max<Eigen::Index>(nev, max_basis - room));
        Matrix kept(size, k2);
        for (Eigen::Index p = 0; p < k2; ++p) kept.col(p) = y.col(order[static_cast<std::size_t>(p)]);
        Eigen::HouseholderQR<Matrix> qr(kept);
        const Matrix q = qr.householderQ() * Matrix::Identity(size, k2);
        const Matrix nv = v.leftCols(size) * q;
        const Matrix nw = w.leftCols(size) * q;
        const Matrix ng = q.adjoint() * g.topLeftCorner(size, size) * q;
        v.leftCols(k2) = nv;
        w.leftCols(k2) = nw;
        g.topLeftCorner(k2, k2) = ng;
        size = k2;
      }
      for (Eigen::Index p = 0; p < room && size < std::min(max_basis, subspace_dim); ++p) {
        Vector probe;
        precond(random_unit(dim, rng), previous[static_cast<std::size_t>(p % nev)], probe);
        if (!probe.allFinite()) probe = random_unit(dim, rng);
        add_vector(std::move(probe));
      }
      t = random_unit(dim, rng);
      continue;
    }
    if (target < 0) {
      t = random_unit(dim, rng);
      continue;
    }
    if (size >= subspace_dim) break;

    precond(residual, theta[target], t);
    if (!t.allFinite()) t = residual;

    if (size == max_basis) {
      Matrix kept(size, keep);
      for (Eigen::Index p = 0; p < keep; ++p) kept.col(p) = y.col(order[static_cast<std::size_t>(p)]);
      Eigen::HouseholderQR<Matrix> qr(kept);
      const Matrix q = qr.householderQ() * Matrix::Identity(size, keep);
      const Matrix nv = v.leftCols(size) * q;
      const Matrix nw = w.leftCols(size) * q;
      const Matrix ng = q.adjoint() * g.topLeftCorner(size, size) * q;
      v.leftCols(keep) = nv;
      w.leftCols(keep) = nw;
      g.topLeftCorner(keep, keep) = ng;
      size = keep;
    }
  }

  // Final Ritz pairs from the current search space.
  if (size > 0) {
    Eigen::ComplexEigenSolver<Matrix> es(g.topLeftCorner(size, size), true);
    theta = es.eigenvalues();
    y = es.eigenvectors();
    order.resize(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
      const double ap = std::abs(theta[p]), aq = std::abs(theta[q]);
      if (ap != aq) return ap < aq;
      return theta[p].real() > theta[q].real();
    });
    const Eigen::Index count = std::min(nev, size);
    out.worst_residual = 0.0;
    for (Eigen::Index p = 0; p < count; ++p) {
      const Eigen::Index idx = order[static_cast<std::size_t>(p)];
      const Vector yy = y.col(idx).normalized();
      RitzPair pair;
      pair.value = theta[idx];
      pair.vector = v.leftCols(size) * yy;
      const double nx = pair.vector.norm();
      pair.vector /= nx;
      pair.residual = (w.leftCols(size) * yy / nx - pair.value * pair.vector).norm();
      out.worst_residual = std::max(out.worst_residual, pair.residual);
      out.pairs.push_back(std::move(pair));
    }
    if (count < nev) out.converged = false;
    if (out.converged && out.worst_residual > opt.tol) out.converged = false;
    if (!out.converged && size >= subspace_dim && count == nev && out.worst_residual <= opt.tol)
      out.converged = true;
  }
  return out;
}

}  // namespace lindstat::krylov
