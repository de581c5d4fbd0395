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
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "lindstat/solvers.hpp"
#include "oracle.hpp"

using namespace lindstat;

namespace {

ChainModel make(int n, double delta, bool staggered, double g, double mu, double mub, double deph) {
  ChainModel m;
  m.chain = ChainSpec::uniform(n, delta);
  if (staggered) m.chain.field = staggered_field(n);
  m.bath = {g, mu, mub, deph};
  return m;
}

std::vector<ChainModel> preset_models(int n) {
  return {make(n, 0.0, false, 1.0, 0.2, 0.3, 0.0), make(n, 0.0, false, 1.0, 0.2, 0.3, 1.0),
          make(n, 1.0, false, 0.1, 1.0, 0.0, 0.0), make(n, 0.5, false, 1.0, 0.2, 0.3, 0.0),
          make(n, 0.5, true, 1.0, 0.1, 0.0, 0.0),  make(n, 3.0, false, 1.0, 0.2, 0.3, 0.0)};
}

std::vector<double> dense_decay_rates(const ChainModel& m, int k) {
  const int n = m.sites();
  const auto& b = m.bath;
  const oracle::Mat full = oracle::superoperator(
      oracle::hamiltonian(n, m.chain.delta, m.chain.field),
      oracle::jumps(n, b.gamma_drive, b.mu, b.mu_bar, b.gamma_deph));
  return oracle::sector_decay_rates(full, n, k);
}

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("steady state agrees with the dense kernel oracle") {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& m : preset_models(n)) {
      const DensityOperator rho = find_ness(m);
      const DensityOperator ref = dense_null_space_oracle(m);
      CHECK(trace_distance(rho, ref) < 1e-8);
      CHECK(rho.residual < 1e-10);
    }
  }
}

TEST_CASE("steady-state invariants") {
  for (const auto& m : preset_models(5)) {
    const DensityOperator rho = find_ness(m);
    CHECK(rho.kind == ModeKind::kNess);
    CHECK(rho.lambda == cplx(0.0));
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    const DenseMatrix full = rho.to_full();
    CHECK(max_abs(full - full.adjoint()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(full);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    const Eigen::VectorXcd h = hermitize(*rho.basis, rho.coefficients);
    CHECK((h - rho.coefficients).norm() < 1e-10);
    // Residual recomputed from the full-space Liouvillian.
    CHECK(apply_liouvillian(m, full).norm() < 1e-9);
  }
}

TEST_CASE("no driving gives the infinite-temperature state") {
  for (double deph : {0.0, 1.0}) {
    for (double delta : {0.0, 1.0}) {
      const auto m = make(6, delta, true, 1.0, 0.0, 0.0, deph);
      const DensityOperator rho = find_ness(m);
      DensityOperator id = rho;
      id.coefficients = rho.basis->trace_vector() / 64.0;
      CHECK(trace_distance(rho, id) < 1e-10);
    }
  }
  const DensityOperator ref = dense_null_space_oracle(make(3, 0.5, false, 1.0, 0.0, 0.0, 0.0));
  CHECK(max_abs(ref.to_full() - DenseMatrix::Identity(8, 8) / 8.0) < 1e-12);
}

TEST_CASE("spin current is homogeneous") {
  const int n = 4;
  const auto m = make(n, 0.0, false, 1.0, 0.2, 0.3, 0.0);
  const DenseMatrix rho = find_ness(m).to_full();
  std::vector<double> currents;
  for (int j = 1; j < n; ++j) {
    const oracle::Mat op = 2.0 * (oracle::site('x', j, n) * oracle::site('y', j + 1, n) -
                                  oracle::site('y', j, n) * oracle::site('x', j + 1, n));
    currents.push_back((rho * op).trace().real());
  }
  CHECK(std::abs(currents[0]) > 1e-3);
  for (double c : currents) CHECK(std::abs(c - currents[0]) < 1e-8);
}

TEST_CASE("dense oracle kernel is one-dimensional") {
  const auto m = make(2, 0.0, false, 1.0, 0.2, 0.3, 0.0);
  const SectorBasis basis(2);
  const DenseMatrix s = to_dense(build_superoperator_sector(m, basis));
  Eigen::JacobiSVD<DenseMatrix> svd(s);
  const auto& sv = svd.singularValues();
  CHECK((sv.array() < 1e-12).count() == 1);
}

TEST_CASE("decay modes match dense sector eigenvalues") {
  for (int n = 2; n <= 4; ++n) {
    for (const auto& m : preset_models(n)) {
      const auto ref = dense_decay_rates(m, 5);
      const int k = static_cast<int>(ref.size());
      if (k == 0) continue;
      std::vector<DensityOperator> modes;
      try {
        modes = find_decay_modes(m, k);
      } catch (const PartialResultError& e) {
        modes = e.found;
      }
      REQUIRE(modes.size() == ref.size());
      for (int a = 0; a < k; ++a) CHECK(std::abs(modes[a].lambda.real() - ref[a]) < 1e-8);
    }
  }
}

TEST_CASE("decay-mode invariants") {
  for (const auto& m : preset_models(5)) {
    const auto modes = find_decay_modes(m, 2);
    REQUIRE(modes.size() == 2);
    CHECK(modes[0].lambda.real() >= modes[1].lambda.real());
    for (const auto& h : modes) {
      CHECK(h.kind == ModeKind::kHdm);
      CHECK(h.lambda.real() < 0.0);
      CHECK(h.lambda.imag() == 0.0);
      CHECK(std::abs(h.trace()) < 1e-10);
      CHECK(std::abs(h.coefficients.norm() - 1.0) < 1e-12);
      const DenseMatrix full = h.to_full();
      CHECK(max_abs(full - full.adjoint()) < 1e-12);
      Eigen::Index at = 0;
      full.diagonal().cwiseAbs().maxCoeff(&at);
      CHECK(full(at, at).real() > 0.0);
      const DenseMatrix lrho = apply_liouvillian(m, full);
      CHECK((lrho - h.lambda.real() * full).norm() < 1e-8);
    }
  }
}

TEST_CASE("leading dephasing decay modes are nondegenerate") {
  const auto modes = find_decay_modes(make(6, 0.0, false, 1.0, 0.2, 0.3, 1.0), 2);
  REQUIRE(modes.size() == 2);
  CHECK(std::abs(modes[0].lambda - modes[1].lambda) > 1e-9);
}

TEST_CASE("decay-mode blocks carry trace only collectively") {
  const auto m = make(4, 0.5, false, 1.0, 0.2, 0.3, 0.0);
  const auto modes = find_decay_modes(m, 2);
  for (const auto& h : modes) {
    cplx total = 0.0;
    double largest = 0.0;
    for (int k = 0; k <= 4; ++k) {
      const cplx t = h.block(k).trace();
      total += t;
      largest = std::max(largest, std::abs(t));
      if (h.block(k).rows() > 1) {
        const auto s = block_spectrum(h, k);
        double sum = std::accumulate(s.values.begin(), s.values.end(), 0.0);
        CHECK(std::abs(sum - t.real()) < 1e-10);
      }
    }
    CHECK(std::abs(total) < 1e-10);
    // Boundary jumps move weight between blocks, so single blocks are not traceless.
    CHECK(largest > 1e-3);
  }
}

TEST_CASE("block spectra") {
  SUBCASE("infinite-temperature state") {
    const auto m = make(4, 0.0, false, 1.0, 0.0, 0.0, 0.0);
    const auto rho = find_ness(m);
    const auto s = block_spectrum(rho, 2);
    REQUIRE(s.values.size() == 6);
    for (double v : s.values) CHECK(std::abs(v - 1.0 / 16.0) < 1e-12);
    CHECK(s.degenerate_pairs == 5);
  }
  SUBCASE("trace consistency") {
    const auto rho = find_ness(make(2, 0.0, false, 1.0, 0.2, 0.3, 0.0));
    const auto s = block_spectrum(rho, 1);
    REQUIRE(s.values.size() == 2);
    CHECK(std::abs(s.values[0] + s.values[1] - rho.block(1).trace().real()) < 1e-12);
    CHECK(std::is_sorted(s.values.begin(), s.values.end()));
  }
  SUBCASE("NESS eigenvalues sum to one over all blocks") {
    for (const auto& m : preset_models(6)) {
      const auto rho = find_ness(m);
      double total = 0.0;
      for (int k = 0; k <= 6; ++k) {
        try {
          const auto s = block_spectrum(rho, k);
          total += std::accumulate(s.values.begin(), s.values.end(), 0.0);
        } catch (const EmptySpectrumError&) {
        }
      }
      // Discarded values are below 1e-12 relative and contribute no visible mass.
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
  SUBCASE("empty block") {
    const auto rho = find_ness(make(3, 0.0, false, 1.0, 0.2, 0.3, 0.0));
    DensityOperator z = rho;
    z.coefficients.setZero();
    z.coefficients[rho.basis->block_offset(1)] = 1.0;
    CHECK_THROWS_AS(block_spectrum(z, 2), EmptySpectrumError);
    const auto s = block_spectrum(z, 1);
    CHECK(s.values.size() == 1);
    CHECK(s.discarded_count == 2);
  }
  CHECK(hermitian_eigenvalues(DenseMatrix::Identity(3, 3) * 2.0) ==
        std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("solver error paths") {
  SUBCASE("degenerate steady state") {
    LindbladTerms t;
    t.n = 3;
    t.hamiltonian = build_hamiltonian(ChainSpec::uniform(3, 0.5));
    SectorProblem p(t);
    CHECK_THROWS_AS(p.ness(SolverOptions{}), DegeneracyError);
    CHECK_THROWS_AS(dense_null_space_oracle(t), DegeneracyError);
  }
  SUBCASE("iteration cap") {
    const auto m = make(4, 0.5, false, 1.0, 0.2, 0.3, 0.0);
    try {
      find_ness(m, 1e-14, 1);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.best_residual > 0.0);
    }
  }
  SUBCASE("too many requested modes") {
    const auto m = make(2, 0.0, false, 1.0, 0.2, 0.3, 0.0);
    try {
      find_decay_modes(m, 5);
      FAIL("expected PartialResultError");
    } catch (const PartialResultError& e) {
      CHECK(e.found.size() < 5);
      for (const auto& h : e.found) CHECK(h.lambda.real() < 0.0);
    }
  }
  CHECK_THROWS_AS(find_decay_modes(make(3, 0, false, 1, 0.2, 0.3, 0), 0), ArgumentError);
  CHECK_THROWS_AS(find_ness(make(3, 0, false, 1, 0.2, 0.3, 0), 0.0), ArgumentError);
  CHECK_THROWS_AS(dense_null_space_oracle(make(6, 0, false, 1, 0.2, 0.3, 0)), ArgumentError);
  CHECK_THROWS_AS(trace_distance(find_ness(make(2, 0, false, 1, 0.2, 0.3, 0)),
                                 find_ness(make(3, 0, false, 1, 0.2, 0.3, 0))),
                  ArgumentError);
}

TEST_CASE("ritz values are dissipative") {
  const auto m = make(5, 0.5, true, 1.0, 0.1, 0.0, 0.0);
  for (const auto& h : find_decay_modes(m, 4)) CHECK(h.lambda.real() <= 1e-10);
}
