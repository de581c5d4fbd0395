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

#include "lindstat/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lindstat/errors.hpp"

namespace lindstat {

void BathSpec::validate() const {
  if (!(gamma_drive > 0.0)) {
    throw ArgumentError("coupling Gamma must be positive, got " + std::to_string(gamma_drive));
  }
  if (!(gamma_deph >= 0.0)) {
    throw ArgumentError("dephasing gamma must be nonnegative, got " + std::to_string(gamma_deph));
  }
  // Small slack so that mu = 1 style boundaries pass after decimal parsing.
  constexpr double kSlack = 1e-12;
  if (std::abs(mu + mu_bar) > 1.0 + kSlack) {
    std::ostringstream os;
    os << "driving rates negative: |mu + mu_bar| <= 1 violated (mu=" << mu
       << ", mu_bar=" << mu_bar << ")";
    throw ArgumentError(os.str());
  }
  if (std::abs(mu - mu_bar) > 1.0 + kSlack) {
    std::ostringstream os;
    os << "driving rates negative: |mu - mu_bar| <= 1 violated (mu=" << mu
       << ", mu_bar=" << mu_bar << ")";
    throw ArgumentError(os.str());
  }
}

std::array<double, 4> BathSpec::driving_rates() const {
  auto clamp = [](double r) { return std::max(r, 0.0); };
  return {clamp(gamma_drive * (1.0 - mu + mu_bar)), clamp(gamma_drive * (1.0 + mu - mu_bar)),
          clamp(gamma_drive * (1.0 + mu + mu_bar)), clamp(gamma_drive * (1.0 - mu - mu_bar))};
}

SparseMatrix LindbladTerms::decay_operator() const {
  SparseMatrix k(hamiltonian.rows(), hamiltonian.cols());
  for (const auto& l : jumps) {
    SparseMatrix ll = SparseMatrix(l.adjoint()) * l;
    k += ll;
  }
  k.makeCompressed();
  return k;
}

std::vector<SparseMatrix> build_jump_operators(const ChainModel& model) {
  model.validate();
  const int n = model.sites();
  const auto rates = model.bath.driving_rates();
  const std::array<std::pair<SiteOp, int>, 4> ops = {
      std::pair{SiteOp::Plus, 1}, std::pair{SiteOp::Minus, 1},
      std::pair{SiteOp::Plus, n}, std::pair{SiteOp::Minus, n}};

  std::vector<SparseMatrix> jumps;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    // Zero-rate channels contribute nothing and are dropped.
    if (rates[k] <= 0.0) continue;
    SparseMatrix l = site_operator(ops[k].first, ops[k].second, n) * cplx{std::sqrt(rates[k])};
    jumps.push_back(std::move(l));
  }
  if (model.bath.gamma_deph > 0.0) {
    const double amp = std::sqrt(model.bath.gamma_deph / 2.0);
    for (int j = 1; j <= n; ++j) {
      SparseMatrix l = site_operator(SiteOp::Z, j, n) * cplx{amp};
      jumps.push_back(std::move(l));
    }
  }
  return jumps;
}

LindbladTerms build_lindblad_terms(const ChainModel& model) {
  model.validate();
  return LindbladTerms{model.sites(), build_hamiltonian(model.chain), build_jump_operators(model)};
}

Liouvillian::Liouvillian(LindbladTerms terms) : terms_(std::move(terms)) {
  for (const auto& l : terms_.jumps) jumps_adj_.emplace_back(l.adjoint());
  decay_ = terms_.decay_operator();
}

Liouvillian::Liouvillian(const ChainModel& model) : Liouvillian(build_lindblad_terms(model)) {}

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(terms_.n));
  if (rho.rows() != dim || rho.cols() != dim) {
    std::ostringstream os;
    os << "operator is " << rho.rows() << "x" << rho.cols() << ", Liouvillian acts on "
       << dim << "x" << dim;
    throw ArgumentError(os.str());
  }
  const cplx i{0.0, 1.0};
  const auto& h = terms_.hamiltonian;
  DenseMatrix out = -i * (h * rho) + i * (rho * h);
  out -= decay_ * rho;
  out -= rho * decay_;
  for (std::size_t k = 0; k < terms_.jumps.size(); ++k) {
    DenseMatrix lr = terms_.jumps[k] * rho;
    out += 2.0 * (lr * jumps_adj_[k]);
  }
  return out;
}

DenseMatrix apply_liouvillian(const ChainModel& model, const DenseMatrix& rho) {
  return Liouvillian(model).apply(rho);
}

// ---------------------------------------------------------------------------
// SectorBasis

SectorBasis::SectorBasis(int n) : n_(n) {
  if (n < 1 || n > 16) {
    throw ArgumentError("sector basis supports 1..16 sites, got " + std::to_string(n));
  }
  const std::uint32_t dim = hilbert_dim(n);
  states_.resize(n + 1);
  rank_.resize(dim);
  up_.resize(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const int up = up_count(s, n);
    up_[s] = static_cast<std::uint8_t>(up);
    rank_[s] = static_cast<std::uint32_t>(states_[up].size());
    states_[up].push_back(s);
  }
  offsets_.resize(n + 2);
  offsets_[0] = 0;
  for (int z = 0; z <= n; ++z) {
    const std::size_t d = states_[z].size();
    offsets_[z + 1] = offsets_[z] + d * d;
  }
}

void SectorBasis::check_up(int n_up) const {
  if (n_up < 0 || n_up > n_) {
    throw ArgumentError("up count " + std::to_string(n_up) + " outside 0.." +
                        std::to_string(n_));
  }
}

std::uint32_t SectorBasis::block_dim(int n_up) const {
  check_up(n_up);
  return static_cast<std::uint32_t>(states_[n_up].size());
}

std::size_t SectorBasis::block_offset(int n_up) const {
  check_up(n_up);
  return offsets_[n_up];
}

const std::vector<std::uint32_t>& SectorBasis::states(int n_up) const {
  check_up(n_up);
  return states_[n_up];
}

std::size_t SectorBasis::index(std::uint32_t i, std::uint32_t j) const {
  const int z = up_[i];
  if (z != up_[j]) {
    throw ArgumentError("|i><j| lies outside the zero magnetization-difference sector");
  }
  return offsets_[z] + static_cast<std::size_t>(rank_[i]) * states_[z].size() + rank_[j];
}

std::pair<std::uint32_t, std::uint32_t> SectorBasis::pair(std::size_t index) const {
  if (index >= size()) throw ArgumentError("sector index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const int z = static_cast<int>(it - offsets_.begin()) - 1;
  const std::size_t local = index - offsets_[z];
  const std::size_t d = states_[z].size();
  return {states_[z][local / d], states_[z][local % d]};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SectorBasis::pairs() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(size());
  for (const auto& st : states_) {
    for (auto i : st) {
      for (auto j : st) out.emplace_back(i, j);
    }
  }
  return out;
}

Eigen::VectorXcd SectorBasis::trace_vector() const {
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size()));
  for (int z = 0; z <= n_; ++z) {
    const std::size_t d = states_[z].size();
    for (std::size_t r = 0; r < d; ++r) t[static_cast<Eigen::Index>(offsets_[z] + r * d + r)] = 1.0;
  }
  return t;
}

DenseMatrix SectorBasis::embed(const Eigen::VectorXcd& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != size()) {
    throw ArgumentError("coefficient vector does not match the sector basis");
  }
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_));
  DenseMatrix rho = DenseMatrix::Zero(dim, dim);
  for (int z = 0; z <= n_; ++z) {
    const auto& st = states_[z];
    const std::size_t d = st.size();
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        rho(st[a], st[b]) = coeffs[static_cast<Eigen::Index>(offsets_[z] + a * d + b)];
      }
    }
  }
  return rho;
}

Eigen::VectorXcd SectorBasis::restrict(const DenseMatrix& rho, double* leakage) const {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_));
  if (rho.rows() != dim || rho.cols() != dim) {
    throw ArgumentError("operator dimension does not match the sector basis");
  }
  Eigen::VectorXcd c(static_cast<Eigen::Index>(size()));
  double outside = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (up_[i] == up_[j]) {
        c[static_cast<Eigen::Index>(index(i, j))] = rho(i, j);
      } else {
        outside += std::norm(rho(i, j));
      }
    }
  }
  if (leakage != nullptr) *leakage = std::sqrt(outside);
  return c;
}

DenseMatrix SectorBasis::block(const Eigen::VectorXcd& coeffs, int n_up) const {
  check_up(n_up);
  if (static_cast<std::size_t>(coeffs.size()) != size()) {
    throw ArgumentError("coefficient vector does not match the sector basis");
  }
  const auto d = static_cast<Eigen::Index>(states_[n_up].size());
  // Row-major flattening of the block.
  return Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      coeffs.data() + offsets_[n_up], d, d);
}

DenseMatrix magnetization_block(const SectorBasis& basis, const Eigen::VectorXcd& coeffs,
                                int n_up) {
  return basis.block(coeffs, n_up);
}

// ---------------------------------------------------------------------------
// Sector superoperator
//
// Coefficient (k, l) of L(|i><j|):
//   A_ki delta_lj + delta_ki B_jl + sum_mu 2 L_ki conj(L_lj)
// with A = -iH - K and B = iH - K, K = sum_mu L^dagger L. Rows are assembled
// one at a time, so the row of (k, l) needs row k of A, column l of B and
// rows k and l of every jump.

SparseMatrix build_superoperator_sector(const LindbladTerms& terms, const SectorBasis& basis) {
  if (terms.n != basis.sites()) {
    throw ArgumentError("sector basis has " + std::to_string(basis.sites()) +
                        " sites, model has " + std::to_string(terms.n));
  }
  const cplx i{0.0, 1.0};
  const SparseMatrix decay = terms.decay_operator();
  const SparseMatrix a = SparseMatrix(-i * terms.hamiltonian) - decay;
  // Row l of b_t is column l of B.
  const SparseMatrix b_t = SparseMatrix((i * terms.hamiltonian - decay).transpose());

  const std::size_t dim = basis.size();
  std::vector<int> outer(dim + 1, 0);
  std::vector<int> inner;
  std::vector<cplx> values;
  inner.reserve(dim * 16);
  values.reserve(dim * 16);

  std::vector<std::pair<std::size_t, cplx>> row;
  std::size_t r = 0;
  for (int z = 0; z <= basis.sites(); ++z) {
    const auto& st = basis.states(z);
    for (std::uint32_t k : st) {
      for (std::uint32_t l : st) {
        row.clear();
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
          row.emplace_back(basis.index(static_cast<std::uint32_t>(it.col()), l), it.value());
        }
        for (SparseMatrix::InnerIterator it(b_t, l); it; ++it) {
          row.emplace_back(basis.index(k, static_cast<std::uint32_t>(it.col())), it.value());
        }
        for (const auto& jump : terms.jumps) {
          for (SparseMatrix::InnerIterator ik(jump, k); ik; ++ik) {
            const auto src_i = static_cast<std::uint32_t>(ik.col());
            for (SparseMatrix::InnerIterator il(jump, l); il; ++il) {
              const auto src_j = static_cast<std::uint32_t>(il.col());
              if (basis.up(src_i) != basis.up(src_j)) continue;
              row.emplace_back(basis.index(src_i, src_j), 2.0 * ik.value() * std::conj(il.value()));
            }
          }
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t p = 0; p < row.size();) {
          std::size_t q = p;
          cplx sum{};
          while (q < row.size() && row[q].first == row[p].first) sum += row[q++].second;
          if (sum != cplx{}) {
            inner.push_back(static_cast<int>(row[p].first));
            values.push_back(sum);
          }
          p = q;
        }
        outer[++r] = static_cast<int>(inner.size());
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dim);
  return SparseMatrix(Eigen::Map<const SparseMatrix>(n, n, static_cast<Eigen::Index>(inner.size()),
                                                     outer.data(), inner.data(), values.data()));
}

SparseMatrix build_superoperator_sector(const ChainModel& model, const SectorBasis& basis) {
  return build_superoperator_sector(build_lindblad_terms(model), basis);
}

// ---------------------------------------------------------------------------

DenseMatrix random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DenseMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = cplx{g(rng), g(rng)};
  }
  return DenseMatrix(0.5 * (m + m.adjoint()));
}

bool check_weak_symmetry(const ChainModel& model, const SparseMatrix& u, int trials, double tol,
                         std::uint64_t seed) {
  const Liouvillian liou(model);
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(model.sites()));
  if (u.rows() != dim || u.cols() != dim) {
    throw ArgumentError("symmetry operator dimension does not match the chain");
  }
  const DenseMatrix ud = to_dense(u);
  const double unitarity = (ud.adjoint() * ud - DenseMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (unitarity > tol) {
    throw ArgumentError("symmetry operator is not unitary (max |U^dagger U - 1| = " +
                        std::to_string(unitarity) + ")");
  }
  for (int t = 0; t < trials; ++t) {
    const DenseMatrix rho = random_hermitian(static_cast<int>(dim), seed + static_cast<std::uint64_t>(t));
    const DenseMatrix lr = liou.apply(rho);
    const DenseMatrix lhs = ud * lr * ud.adjoint();
    const DenseMatrix rhs = liou.apply(ud * rho * ud.adjoint());
    if ((lhs - rhs).norm() >= tol * lr.norm()) return false;
  }
  return true;
}

}  // namespace lindstat
