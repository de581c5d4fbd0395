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

#include "lindstat/rmtstats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "lindstat/errors.hpp"

namespace lindstat {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spacing(double s) {
  if (!(s >= 0.0)) throw ArgumentError("spacing must be nonnegative");
}

// Legendre polynomials P_0..P_degree at t in [-1, 1].
void legendre_row(double t, int degree, double* out) {
  out[0] = 1.0;
  if (degree >= 1) out[1] = t;
  for (int k = 2; k <= degree; ++k) {
    out[k] = ((2.0 * k - 1.0) * t * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
  }
}

}  // namespace

const char* to_string(Ensemble e) {
  switch (e) {
    case Ensemble::kPoisson: return "poisson";
    case Ensemble::kGOE: return "goe";
    case Ensemble::kGUE: return "gue";
  }
  return "?";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kPoisson: return "poisson";
    case Classification::kGOE: return "goe";
    case Classification::kGUE: return "gue";
    case Classification::kAmbiguous: return "ambiguous";
  }
  return "?";
}

std::optional<Ensemble> parse_ensemble(std::string_view name) {
  for (auto e : kAllEnsembles) {
    if (name == to_string(e)) return e;
  }
  return std::nullopt;
}

const char* to_string(UnfoldMethod m) {
  return m == UnfoldMethod::kPolynomial ? "polynomial" : "log_polynomial";
}

double UnfoldedSpectrum::mean_spacing() const {
  if (levels.size() < 2) return 0.0;
  return (levels.back() - levels.front()) / static_cast<double>(levels.size() - 1);
}

UnfoldedSpectrum unfold(const std::vector<double>& ascending, int degree, double trim_fraction,
                        bool use_log) {
  if (degree < 1) throw ArgumentError("unfolding degree must be >= 1");
  if (!(trim_fraction >= 0.0 && trim_fraction <= 0.1)) {
    throw ArgumentError("trim fraction must lie in [0, 0.1]");
  }
  const std::size_t count = ascending.size();
  if (count < static_cast<std::size_t>(degree) + 10) {
    std::ostringstream os;
    os << "unfolding with degree " << degree << " needs at least " << degree + 10
       << " levels, got " << count;
    throw SampleSizeError(os.str());
  }
  UnfoldedSpectrum u;
  u.method = use_log ? UnfoldMethod::kLogPolynomial : UnfoldMethod::kPolynomial;
  u.degree = degree;

  std::vector<double> x(ascending);
  if (use_log) {
    for (double& v : x) {
      if (!(v > 0.0)) throw ArgumentError("logarithmic unfolding needs positive eigenvalues");
      v = std::log(v);
    }
  }
  const double lo = x.front(), hi = x.back();
  u.trimmed = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(count)));
  const std::size_t kept = count - 2 * u.trimmed;
  if (!(hi > lo)) {
    u.degenerate = true;
    u.levels.assign(kept, 0.0);
    return u;
  }

  const auto rows = static_cast<Eigen::Index>(count);
  Eigen::MatrixXd design(rows, degree + 1);
  Eigen::VectorXd staircase(rows);
  std::vector<double> row(degree + 1);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const double t = (2.0 * x[j] - (hi + lo)) / (hi - lo);
    legendre_row(t, degree, row.data());
    for (int k = 0; k <= degree; ++k) design(j, k) = row[k];
    staircase[j] = static_cast<double>(j + 1);
  }
  const Eigen::VectorXd coeff = design.colPivHouseholderQr().solve(staircase);
  const Eigen::VectorXd fitted = design * coeff;

  u.levels.assign(fitted.data() + u.trimmed, fitted.data() + u.trimmed + kept);
  const double mean = u.mean_spacing();
  if (mean > 0.0) {
    const double origin = u.levels.front();
    for (double& v : u.levels) v = (v - origin) / mean;
  }
  return u;
}

UnfoldedSpectrum unfold(const Spectrum& spectrum, int degree, double trim_fraction, bool use_log) {
  return unfold(spectrum.values, degree, trim_fraction, use_log);
}

SpacingSample spacing_sample(const UnfoldedSpectrum& u, Provenance provenance) {
  SpacingSample s;
  if (u.levels.size() >= 2) {
    s.spacings.reserve(u.levels.size() - 1);
    // A locally decreasing fit near an edge would give a negative gap.
    for (std::size_t j = 1; j < u.levels.size(); ++j) {
      s.spacings.push_back(std::max(0.0, u.levels[j] - u.levels[j - 1]));
    }
  }
  s.provenance.push_back(std::move(provenance));
  return s;
}

SpacingSample pool(const std::vector<SpacingSample>& samples) {
  SpacingSample out;
  for (const auto& s : samples) {
    out.spacings.insert(out.spacings.end(), s.spacings.begin(), s.spacings.end());
    out.provenance.insert(out.provenance.end(), s.provenance.begin(), s.provenance.end());
  }
  return out;
}

double surmise_pdf(Ensemble e, double s) {
  check_spacing(s);
  switch (e) {
    case Ensemble::kPoisson: return std::exp(-s);
    case Ensemble::kGOE: return 0.5 * kPi * s * std::exp(-0.25 * kPi * s * s);
    case Ensemble::kGUE: return 32.0 / (kPi * kPi) * s * s * std::exp(-4.0 / kPi * s * s);
  }
  return 0.0;
}

double surmise_cdf(Ensemble e, double s) {
  check_spacing(s);
  switch (e) {
    case Ensemble::kPoisson: return -std::expm1(-s);
    case Ensemble::kGOE: return -std::expm1(-0.25 * kPi * s * s);
    case Ensemble::kGUE:
      return std::erf(2.0 * s / std::sqrt(kPi)) - 4.0 * s / kPi * std::exp(-4.0 / kPi * s * s);
  }
  return 0.0;
}

double ks_statistic(std::span<const double> spacings, Ensemble e) {
  if (spacings.empty()) throw SampleSizeError("KS statistic of an empty sample");
  std::vector<double> sorted(spacings.begin(), spacings.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = surmise_cdf(e, sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic(const SpacingSample& sample, Ensemble e) {
  return ks_statistic(std::span<const double>(sample.spacings), e);
}

std::array<double, 3> ks_all(const SpacingSample& sample) {
  std::array<double, 3> out{};
  for (auto e : kAllEnsembles) out[static_cast<int>(e)] = ks_statistic(sample, e);
  return out;
}

std::vector<HistogramBin> spacing_histogram(const SpacingSample& sample, double bin_width,
                                            double s_max) {
  if (!(bin_width > 0.0)) throw ArgumentError("bin width must be positive");
  if (!(s_max > 0.0)) throw ArgumentError("histogram range must be positive");
  const auto bins = static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
  std::vector<HistogramBin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) out[k].center = (static_cast<double>(k) + 0.5) * bin_width;
  if (sample.empty()) return out;
  std::vector<std::size_t> counts(bins, 0);
  for (double s : sample.spacings) {
    if (s < 0.0 || s >= s_max) continue;
    const auto k = std::min(bins - 1, static_cast<std::size_t>(s / bin_width));
    ++counts[k];
  }
  const double norm = static_cast<double>(sample.size()) * bin_width;
  for (std::size_t k = 0; k < bins; ++k) out[k].density = static_cast<double>(counts[k]) / norm;
  return out;
}

namespace {

struct WindowStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  int windows = 0;
};

void count_windows(const UnfoldedSpectrum& u, double length, int windows, std::mt19937_64& rng,
                   WindowStats& stats) {
  const double lo = u.levels.front();
  const double hi = u.levels.back() - length;
  std::uniform_real_distribution<double> start(lo, hi);
  for (int w = 0; w < windows; ++w) {
    const double a = start(rng);
    const auto first = std::lower_bound(u.levels.begin(), u.levels.end(), a);
    const auto last = std::lower_bound(first, u.levels.end(), a + length);
    const auto c = static_cast<double>(last - first);
    stats.sum += c;
    stats.sum_sq += c * c;
    ++stats.windows;
  }
}

void check_window(const UnfoldedSpectrum& u, double length) {
  if (!(length > 0.0)) throw ArgumentError("window length must be positive");
  if (u.levels.size() < 2) throw SampleSizeError("number variance needs at least two levels");
  const double span = u.levels.back() - u.levels.front();
  if (length > span / 3.0) {
    std::ostringstream os;
    os << "window length " << length << " exceeds a third of the unfolded span " << span;
    throw ArgumentError(os.str());
  }
}

}  // namespace

double number_variance(const UnfoldedSpectrum& u, double length, int window_count,
                       std::uint64_t seed) {
  return pooled_number_variance({u}, length, window_count, seed);
}

double pooled_number_variance(const std::vector<UnfoldedSpectrum>& sectors, double length,
                              int window_count, std::uint64_t seed) {
  if (sectors.empty()) throw SampleSizeError("number variance of no spectra");
  if (window_count < 2) throw ArgumentError("need at least two windows");
  double usable = 0.0;
  for (const auto& u : sectors) {
    check_window(u, length);
    usable += u.levels.back() - u.levels.front() - length;
  }
  std::mt19937_64 rng(seed);
  WindowStats stats;
  for (const auto& u : sectors) {
    const double share = (u.levels.back() - u.levels.front() - length) / usable;
    const int windows = std::max(1, static_cast<int>(std::lround(share * window_count)));
    count_windows(u, length, windows, rng, stats);
  }
  const double mean = stats.sum / stats.windows;
  return std::max(0.0, stats.sum_sq / stats.windows - mean * mean);
}

std::vector<Spectrum> generate_synthetic(Ensemble e, int dim, int count, std::uint64_t seed) {
  if (dim < 50) throw ArgumentError("synthetic spectra need dim >= 50");
  if (count < 1) throw ArgumentError("synthetic spectra need count >= 1");
  std::vector<Spectrum> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> g;
    Spectrum s;
    s.source.model_id = std::string("synthetic-") + to_string(e);
    s.source.mode_index = k;
    switch (e) {
      case Ensemble::kPoisson: {
        std::uniform_real_distribution<double> u(0.0, static_cast<double>(dim));
        s.values.resize(dim);
        for (double& v : s.values) v = u(rng);
        std::sort(s.values.begin(), s.values.end());
        break;
      }
      case Ensemble::kGOE: {
        Eigen::MatrixXd a(dim, dim);
        for (int r = 0; r < dim; ++r) {
          for (int c = 0; c < dim; ++c) a(r, c) = g(rng);
        }
        const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
        s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
        break;
      }
      case Ensemble::kGUE: {
        Eigen::MatrixXcd a(dim, dim);
        for (int r = 0; r < dim; ++r) {
          for (int c = 0; c < dim; ++c) a(r, c) = cplx{g(rng), g(rng)};
        }
        const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
        break;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

Classification classify(const SpacingSample& sample, double margin) {
  return classify(sample, margin, kAllEnsembles);
}

Classification classify(const SpacingSample& sample, double margin,
                        std::span<const Ensemble> candidates) {
  if (candidates.size() < 2) throw ArgumentError("classification needs two candidate ensembles");
  if (sample.size() < 100) {
    throw SampleSizeError("classification needs at least 100 spacings, got " +
                          std::to_string(sample.size()));
  }
  std::vector<std::pair<double, Ensemble>> ranked;
  for (auto e : candidates) ranked.emplace_back(ks_statistic(sample, e), e);
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (ranked[1].first - ranked[0].first < margin) return Classification::kAmbiguous;
  return static_cast<Classification>(ranked[0].second);
}

}  // namespace lindstat
