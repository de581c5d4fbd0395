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

// Level-spacing statistics: unfolding, nearest-neighbour spacings, Wigner
// surmises, Kolmogorov-Smirnov distances and ensemble classification.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lindstat/solvers.hpp"

namespace lindstat {

enum class Ensemble { kPoisson = 0, kGOE = 1, kGUE = 2 };
enum class Classification { kPoisson = 0, kGOE = 1, kGUE = 2, kAmbiguous = 3 };

inline constexpr std::array<Ensemble, 3> kAllEnsembles = {Ensemble::kPoisson, Ensemble::kGOE,
                                                          Ensemble::kGUE};

const char* to_string(Ensemble e);
const char* to_string(Classification c);
std::optional<Ensemble> parse_ensemble(std::string_view name);

enum class UnfoldMethod { kPolynomial, kLogPolynomial };
const char* to_string(UnfoldMethod m);

struct UnfoldedSpectrum {
  std::vector<double> levels;  // ascending, unit mean spacing
  UnfoldMethod method = UnfoldMethod::kPolynomial;
  int degree = 0;
  std::size_t trimmed = 0;  // levels removed at each edge
  bool degenerate = false;  // input had zero spread

  double mean_spacing() const;
};

/// Least-squares polynomial fit of the counting staircase N(x) with x = lambda
/// or log(lambda); levels are mapped through the fit, trimmed at both edges and
/// rescaled to unit mean spacing.
UnfoldedSpectrum unfold(const std::vector<double>& ascending, int degree, double trim_fraction,
                        bool use_log);
UnfoldedSpectrum unfold(const Spectrum& spectrum, int degree, double trim_fraction, bool use_log);

struct Provenance {
  std::string model_id;
  int n_up = 0;
  std::size_t level_count = 0;
  std::size_t discarded_count = 0;
};

struct SpacingSample {
  std::vector<double> spacings;
  std::vector<Provenance> provenance;

  std::size_t size() const { return spacings.size(); }
  bool empty() const { return spacings.empty(); }
};

/// Nearest-neighbour spacings of one unfolded spectrum.
SpacingSample spacing_sample(const UnfoldedSpectrum& u, Provenance provenance);
/// Concatenation of per-sector samples.
SpacingSample pool(const std::vector<SpacingSample>& samples);

double surmise_pdf(Ensemble e, double s);
double surmise_cdf(Ensemble e, double s);

double ks_statistic(std::span<const double> spacings, Ensemble e);
double ks_statistic(const SpacingSample& sample, Ensemble e);
/// KS distance to each ensemble, indexed by Ensemble.
std::array<double, 3> ks_all(const SpacingSample& sample);

struct HistogramBin {
  double center = 0.0;
  double density = 0.0;
};

/// Density-normalised histogram on [0, s_max); integrates to the fraction of
/// the sample below s_max.
std::vector<HistogramBin> spacing_histogram(const SpacingSample& sample, double bin_width,
                                            double s_max);

/// Variance of the level count in `window_count` windows of length L placed
/// uniformly at random inside the unfolded range.
double number_variance(const UnfoldedSpectrum& u, double length, int window_count,
                       std::uint64_t seed = 11);
/// Same over several independently unfolded sectors; windows are shared out
/// in proportion to each sector's usable span.
double pooled_number_variance(const std::vector<UnfoldedSpectrum>& sectors, double length,
                              int window_count, std::uint64_t seed = 11);

/// Poisson: sorted uniform levels; GOE/GUE: eigenvalues of Gaussian real
/// symmetric / complex Hermitian matrices. Matrix k uses seed (seed, k).
std::vector<Spectrum> generate_synthetic(Ensemble e, int dim, int count, std::uint64_t seed);

/// Ensemble with the smallest KS distance if it beats the runner-up by
/// `margin`, otherwise ambiguous.
Classification classify(const SpacingSample& sample, double margin = 0.02);
/// Same, restricted to a subset of ensembles (for example Poisson against GUE).
Classification classify(const SpacingSample& sample, double margin,
                        std::span<const Ensemble> candidates);

}  // namespace lindstat
