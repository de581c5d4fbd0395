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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "lindstat/errors.hpp"
#include "lindstat/spinops.hpp"
#include "oracle.hpp"

using namespace lindstat;

namespace {

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigs(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  return v;
}

const SiteOp kOps[] = {SiteOp::X, SiteOp::Y, SiteOp::Z, SiteOp::Plus, SiteOp::Minus,
                       SiteOp::Identity};
const char kOracleNames[] = {'x', 'y', 'z', '+', '-', '1'};

}  // namespace

TEST_CASE("single-site conventions") {
  const DenseMatrix z = to_dense(site_operator(SiteOp::Z, 1, 1));
  CHECK(z(0, 0) == cplx(1.0));
  CHECK(z(1, 1) == cplx(-1.0));
  CHECK(z(0, 1) == cplx(0.0));

  const DenseMatrix plus = to_dense(site_operator(SiteOp::Plus, 1, 1));
  CHECK(plus(0, 1) == cplx(1.0));
  CHECK(plus.cwiseAbs().sum() == doctest::Approx(1.0));

  const DenseMatrix z2 = to_dense(site_operator(SiteOp::Z, 2, 2));
  const DenseMatrix expect = oracle::kron(oracle::pauli('1'), oracle::pauli('z'));
  CHECK(max_abs(z2 - expect) == 0.0);
  for (int k = 0; k < 4; ++k) CHECK(z2(k, k).real() == (k % 2 == 0 ? 1.0 : -1.0));
}

TEST_CASE("site operators match Kronecker products") {
  for (int n = 1; n <= 4; ++n) {
    for (int s = 1; s <= n; ++s) {
      for (int k = 0; k < 6; ++k) {
        const DenseMatrix got = to_dense(site_operator(kOps[k], s, n));
        CHECK(max_abs(got - oracle::site(kOracleNames[k], s, n)) == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(site_operator(SiteOp::X, 0, 3), ArgumentError);
  CHECK_THROWS_AS(site_operator(SiteOp::X, 4, 3), ArgumentError);
}

TEST_CASE("Pauli algebra is exact") {
  const int n = 3;
  const cplx i1(0.0, 1.0);
  for (int s = 1; s <= n; ++s) {
    const DenseMatrix x = to_dense(site_operator(SiteOp::X, s, n));
    const DenseMatrix y = to_dense(site_operator(SiteOp::Y, s, n));
    const DenseMatrix z = to_dense(site_operator(SiteOp::Z, s, n));
    const DenseMatrix id = DenseMatrix::Identity(8, 8);
    CHECK(max_abs(x * x - id) == 0.0);
    CHECK(max_abs(y * y - id) == 0.0);
    CHECK(max_abs(z * z - id) == 0.0);
    CHECK(max_abs(x * y - i1 * z) == 0.0);
    CHECK(max_abs(y * z - i1 * x) == 0.0);
    CHECK(max_abs(z * x - i1 * y) == 0.0);
    const DenseMatrix plus = to_dense(site_operator(SiteOp::Plus, s, n));
    const DenseMatrix minus = to_dense(site_operator(SiteOp::Minus, s, n));
    CHECK(max_abs(plus - 0.5 * (x + i1 * y)) == 0.0);
    CHECK(max_abs(minus - 0.5 * (x - i1 * y)) == 0.0);
  }
}

TEST_CASE("sparse products agree with dense products") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const SparseMatrix a = site_operator(kOps[rng() % 6], 1 + rng() % n, n);
    const SparseMatrix b = site_operator(kOps[rng() % 6], 1 + rng() % n, n);
    const SparseMatrix prod = a * b;
    const SparseMatrix sum = a + cplx(0.5, -2.0) * b;
    CHECK(max_abs(to_dense(prod) - to_dense(a) * to_dense(b)) < 1e-15);
    CHECK(max_abs(to_dense(sum) - (to_dense(a) + cplx(0.5, -2.0) * to_dense(b))) < 1e-15);
  }
}

TEST_CASE("two-site Hamiltonian spectra") {
  const auto xx = sorted_eigs(to_dense(build_hamiltonian(ChainSpec::uniform(2, 0.0))));
  const std::vector<double> xx_expect = {-2, 0, 0, 2};
  for (int k = 0; k < 4; ++k) CHECK(xx[k] == doctest::Approx(xx_expect[k]).epsilon(1e-14));
  const auto xxx = sorted_eigs(to_dense(build_hamiltonian(ChainSpec::uniform(2, 1.0))));
  const std::vector<double> xxx_expect = {-3, 1, 1, 1};
  for (int k = 0; k < 4; ++k) CHECK(xxx[k] == doctest::Approx(xxx_expect[k]).epsilon(1e-14));
}

TEST_CASE("Hamiltonian matches the Kronecker sum and conserves the up count") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      ChainSpec spec{n, u(rng), {}};
      for (int j = 0; j < n; ++j) spec.field.push_back(u(rng));
      const SparseMatrix h = build_hamiltonian(spec);
      const DenseMatrix hd = to_dense(h);
      CHECK(max_abs(hd - oracle::hamiltonian(n, spec.delta, spec.field)) < 1e-13);
      CHECK(max_abs(hd - hd.adjoint()) == 0.0);
      const DenseMatrix nup = to_dense(total_up_count_operator(n));
      CHECK(max_abs(hd * nup - nup * hd) < 1e-13);
    }
  }
  CHECK_THROWS_AS(build_hamiltonian(ChainSpec{3, 0.0, {0.0, 0.0}}), ArgumentError);
  CHECK_THROWS_AS(build_hamiltonian(ChainSpec{1, 0.0, {0.0}}), ArgumentError);
}

TEST_CASE("staggered field pattern") {
  CHECK(staggered_field(1) == std::vector<double>{-1.0});
  CHECK(staggered_field(3) == std::vector<double>{-1.0, -0.5, 0.0});
  CHECK(staggered_field(6) == std::vector<double>{-1.0, -0.5, 0.0, -1.0, -0.5, 0.0});
}

TEST_CASE("up-count operator") {
  const DenseMatrix n1 = to_dense(total_up_count_operator(1));
  CHECK(n1(0, 0) == cplx(1.0));
  CHECK(n1(1, 1) == cplx(0.0));
  const DenseMatrix n2 = to_dense(total_up_count_operator(2));
  const double expect[] = {2, 1, 1, 0};
  for (int k = 0; k < 4; ++k) CHECK(n2(k, k).real() == expect[k]);
  // up down up = bits 0 1 0
  const DenseMatrix n3 = to_dense(total_up_count_operator(3));
  CHECK(n3(0b010, 0b010).real() == 2.0);
  for (unsigned s = 0; s < 16; ++s) CHECK(up_count(s, 4) == oracle::ups(s, 4));
}

TEST_CASE("magnetization rotation is diagonal in the up count") {
  const double alpha = 0.37;
  const DenseMatrix u = to_dense(magnetization_rotation(3, alpha));
  for (unsigned s = 0; s < 8; ++s) {
    CHECK(std::abs(u(s, s) - std::exp(cplx(0.0, -alpha * oracle::ups(s, 3)))) < 1e-15);
  }
}

TEST_CASE("parity operator") {
  CHECK(max_abs(to_dense(parity_operator(1)) - oracle::pauli('x')) == 0.0);
  DenseMatrix swap = DenseMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  const DenseMatrix expect = oracle::site('x', 1, 2) * oracle::site('x', 2, 2) * swap;
  CHECK(max_abs(to_dense(parity_operator(2)) - expect) == 0.0);
  for (int n = 1; n <= 6; ++n) {
    const DenseMatrix p = to_dense(parity_operator(n));
    CHECK(max_abs(p * p - DenseMatrix::Identity(p.rows(), p.cols())) < 1e-14);
    CHECK(max_abs(p * p.adjoint() - DenseMatrix::Identity(p.rows(), p.cols())) < 1e-14);
  }
  // Reflection plus global flip is a symmetry of the field-free chain.
  const DenseMatrix p = to_dense(parity_operator(4));
  const DenseMatrix h = to_dense(build_hamiltonian(ChainSpec::uniform(4, 0.7)));
  CHECK(max_abs(p * h * p.adjoint() - h) < 1e-13);
}

TEST_CASE("antiunitary factor") {
  CHECK(max_abs(to_dense(antiunitary_conjugator(2)) -
                oracle::kron(oracle::pauli('1'), oracle::pauli('z'))) == 0.0);
  CHECK(max_abs(to_dense(antiunitary_conjugator(4)) -
                oracle::site('z', 2, 4) * oracle::site('z', 4, 4)) == 0.0);
  CHECK(max_abs(to_dense(antiunitary_conjugator(3)) - oracle::site('z', 2, 3)) == 0.0);
  for (int n = 1; n <= 5; ++n) {
    const DenseMatrix z = to_dense(antiunitary_conjugator(n));
    CHECK(max_abs(z * z - DenseMatrix::Identity(z.rows(), z.cols())) == 0.0);
  }
}

TEST_CASE("structural equality") {
  const SparseMatrix a = build_hamiltonian(ChainSpec::uniform(3, 0.5));
  SparseMatrix b = to_dense(a).sparseView();
  CHECK(structurally_equal(a, b));
  b.coeffRef(0, 0) += 1e-12;
  CHECK_FALSE(structurally_equal(a, b));
  CHECK_FALSE(structurally_equal(a, identity_operator(2)));
  CHECK(frobenius_norm(identity_operator(3)) == doctest::Approx(std::sqrt(8.0)));
}
