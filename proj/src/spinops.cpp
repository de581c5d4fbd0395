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

#include "lindstat/spinops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "lindstat/errors.hpp"

namespace lindstat {

namespace {

using Triplet = Eigen::Triplet<cplx>;

void check_site_count(int n) {
  if (n < 1 || n > kMaxSites) {
    throw ArgumentError("site count must be in 1.." + std::to_string(kMaxSites) +
                        ", got " + std::to_string(n));
  }
}

// Bit position of a 1-based site index.
inline int bit_of(int site, int n) { return n - site; }

inline double spin_z(std::uint32_t state, int site, int n) {
  return ((state >> bit_of(site, n)) & 1U) ? -1.0 : 1.0;
}

SparseMatrix from_triplets(std::uint32_t dim, const std::vector<Triplet>& t) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Permutation matrix with a single unit entry per column.
template <class Map>
SparseMatrix permutation(int n, Map&& image) {
  const std::uint32_t dim = hilbert_dim(n);
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::uint32_t s = 0; s < dim; ++s) t.emplace_back(image(s), s, cplx{1.0, 0.0});
  return from_triplets(dim, t);
}

}  // namespace

ChainSpec ChainSpec::uniform(int n, double delta) {
  return ChainSpec{n, delta, std::vector<double>(std::max(n, 0), 0.0)};
}

void ChainSpec::validate() const {
  if (n < 2 || n > kMaxSites) {
    throw ArgumentError("chain needs 2.." + std::to_string(kMaxSites) +
                        " sites, got " + std::to_string(n));
  }
  if (field.size() != static_cast<std::size_t>(n)) {
    throw ArgumentError("field has " + std::to_string(field.size()) +
                        " entries, expected " + std::to_string(n));
  }
}

int up_count(std::uint32_t state, int n) { return n - std::popcount(state); }

Eigen::Matrix2cd single_site_matrix(SiteOp kind) {
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (kind) {
    case SiteOp::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case SiteOp::Y: m << 0.0, -i, i, 0.0; break;
    case SiteOp::Z: m << 1.0, 0.0, 0.0, -1.0; break;
    case SiteOp::Plus: m(0, 1) = 1.0; break;   // down -> up
    case SiteOp::Minus: m(1, 0) = 1.0; break;  // up -> down
    case SiteOp::Identity: m.setIdentity(); break;
  }
  return m;
}

SparseMatrix site_operator(SiteOp kind, int site, int n) {
  check_site_count(n);
  if (site < 1 || site > n) {
    throw ArgumentError("site " + std::to_string(site) + " outside 1.." +
                        std::to_string(n));
  }
  const Eigen::Matrix2cd local = single_site_matrix(kind);
  const int bit = bit_of(site, n);
  const std::uint32_t dim = hilbert_dim(n);
  std::vector<Triplet> t;
  t.reserve(2 * dim);
  for (std::uint32_t col = 0; col < dim; ++col) {
    const std::uint32_t b = (col >> bit) & 1U;
    for (std::uint32_t r = 0; r < 2; ++r) {
      const cplx v = local(r, b);
      if (v == cplx{}) continue;
      const std::uint32_t row = (col & ~(1U << bit)) | (r << bit);
      t.emplace_back(row, col, v);
    }
  }
  return from_triplets(dim, t);
}

SparseMatrix identity_operator(int n) {
  check_site_count(n);
  SparseMatrix m(hilbert_dim(n), hilbert_dim(n));
  m.setIdentity();
  return m;
}

SparseMatrix build_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const std::uint32_t dim = hilbert_dim(n);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim) * n);
  for (std::uint32_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int j = 1; j <= n; ++j) diag += spec.field[j - 1] * spin_z(s, j, n);
    for (int j = 1; j < n; ++j) {
      const double zz = spin_z(s, j, n) * spin_z(s, j + 1, n);
      diag += spec.delta * zz;
      // sigma^x sigma^x + sigma^y sigma^y = 2 (sigma^+ sigma^- + sigma^- sigma^+)
      if (zz < 0.0) {
        const std::uint32_t flipped = s ^ (3U << bit_of(j + 1, n));
        t.emplace_back(flipped, s, cplx{2.0, 0.0});
      }
    }
    if (diag != 0.0) t.emplace_back(s, s, cplx{diag, 0.0});
  }
  return from_triplets(dim, t);
}

std::vector<double> staggered_field(int n) {
  if (n < 1) throw ArgumentError("staggered_field needs n >= 1");
  static constexpr double kPattern[3] = {0.0, -1.0, -0.5};
  std::vector<double> b(n);
  for (int s = 1; s <= n; ++s) b[s - 1] = kPattern[s % 3];
  return b;
}

SparseMatrix total_up_count_operator(int n) {
  check_site_count(n);
  const std::uint32_t dim = hilbert_dim(n);
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const int up = up_count(s, n);
    if (up != 0) t.emplace_back(s, s, cplx(up, 0.0));
  }
  return from_triplets(dim, t);
}

SparseMatrix magnetization_rotation(int n, double alpha) {
  check_site_count(n);
  const std::uint32_t dim = hilbert_dim(n);
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    t.emplace_back(s, s, std::polar(1.0, -alpha * up_count(s, n)));
  }
  return from_triplets(dim, t);
}

SparseMatrix parity_operator(int n) {
  check_site_count(n);
  const std::uint32_t all = hilbert_dim(n) - 1;
  return permutation(n, [n, all](std::uint32_t s) {
    std::uint32_t reflected = 0;
    for (int k = 0; k < n; ++k) reflected |= ((s >> k) & 1U) << (n - 1 - k);
    return reflected ^ all;
  });
}

SparseMatrix antiunitary_conjugator(int n) {
  check_site_count(n);
  const std::uint32_t dim = hilbert_dim(n);
  std::uint32_t even_mask = 0;
  for (int site = 2; site <= n; site += 2) even_mask |= 1U << bit_of(site, n);
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const double sign = (std::popcount(s & even_mask) % 2) ? -1.0 : 1.0;
    t.emplace_back(s, s, cplx{sign, 0.0});
  }
  return from_triplets(dim, t);
}

DenseMatrix to_dense(const SparseMatrix& m) { return DenseMatrix(m); }

double frobenius_norm(const SparseMatrix& m) { return m.norm(); }

bool structurally_equal(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  SparseMatrix pa = a.pruned(cplx{0.0}), pb = b.pruned(cplx{0.0});
  pa.makeCompressed();
  pb.makeCompressed();
  if (pa.nonZeros() != pb.nonZeros()) return false;
  for (Eigen::Index r = 0; r < pa.outerSize(); ++r) {
    SparseMatrix::InnerIterator ia(pa, r), ib(pb, r);
    for (; ia && ib; ++ia, ++ib) {
      if (ia.col() != ib.col() || ia.value() != ib.value()) return false;
    }
    if (ia || ib) return false;
  }
  return true;
}

}  // namespace lindstat
