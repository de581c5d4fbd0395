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

// Experiment runner: configuration, preset catalog, pipeline from model to
// classified spacing statistics, and plot-ready output files.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lindstat/errors.hpp"
#include "lindstat/lindblad.hpp"
#include "lindstat/rmtstats.hpp"
#include "lindstat/solvers.hpp"

namespace lindstat {

enum class FieldPattern { kZero, kStaggered, kExplicit };
enum class LogUnfolding { kAuto, kOn, kOff };

struct UnfoldingParams {
  int degree = 6;
  double trim_fraction = 0.02;
  LogUnfolding log = LogUnfolding::kAuto;  // auto: log for steady states only
  double zero_cutoff = 1e-12;
};

struct ExperimentConfig {
  std::string name = "custom";
  int n = 8;
  double delta = 0.0;
  FieldPattern field_pattern = FieldPattern::kZero;
  std::vector<double> field;  // used when field_pattern is explicit
  double gamma_drive = 1.0;
  double mu = 0.0;
  double mu_bar = 0.0;
  double gamma_deph = 0.0;
  std::vector<double> delta_sweep;  // empty: single point at `delta`

  std::vector<int> sectors;
  ModeKind target = ModeKind::kNess;
  int hdm_count = 0;  // k for decay-mode targets

  UnfoldingParams unfolding;
  double margin = 0.02;
  std::uint64_t seed = 1;
  std::string out_dir;
  double tol = 1e-10;
  int max_iter = 20000;
  int threads = 0;  // 0: hardware concurrency

  /// Throws ConfigError; bath inequalities surface as ArgumentError.
  void validate() const;
  std::vector<double> deltas() const;
  ChainModel model_at(double delta_value) const;
  bool use_log(ModeKind kind) const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

enum class Scale { kPaper, kDesk };
std::optional<Scale> parse_scale(std::string_view name);

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig paper;
  ExperimentConfig desk;
};

const std::vector<Preset>& list_presets();
/// Throws CatalogError listing the valid names.
const Preset& find_preset(std::string_view name);
ExperimentConfig preset_config(std::string_view name, Scale scale);
std::string presets_to_json();

/// One block spectrum after unfolding.
struct SectorResult {
  Spectrum spectrum;
  UnfoldedSpectrum unfolded;
  SpacingSample sample;
  std::string error;  // nonempty when this sector could not be analysed
};

/// Statistics of one density operator (NESS or one decay mode) at one
/// parameter point, pooled over the requested sectors.
struct SeriesResult {
  std::string id;
  double delta = 0.0;
  ModeKind kind = ModeKind::kNess;
  int mode_index = 0;
  cplx lambda{0.0, 0.0};
  double residual = 0.0;
  std::vector<SectorResult> sectors;
  SpacingSample pooled;
  std::array<double, 3> ks{};
  std::optional<Classification> classification;
  bool failed = false;
  std::string error;
};

struct ResultBundle {
  ExperimentConfig config;
  std::vector<SeriesResult> series;
  bool failed = false;
  ErrorCode first_error = ErrorCode::kArgument;
  std::string error;
  double wall_seconds = 0.0;

  const SeriesResult* find(std::string_view id) const;
  std::string summary_json(bool include_runtime = true) const;
};

/// Solves every parameter point, extracts and unfolds the requested blocks,
/// pools, classifies and, when out_dir is set, writes the output files.
/// Solver failures are recorded in the bundle rather than thrown.
ResultBundle run_experiment(const ExperimentConfig& config);

/// Writes histogram.csv, histogram_<id>.csv and surmise_curves.csv.
void emit_figure_data(const ResultBundle& bundle, const std::string& out_dir, double s_max = 4.0,
                      double bin_width = 0.1);
/// Writes summary.json and spacings.csv.
void write_outputs(const ResultBundle& bundle, const std::string& out_dir);

/// Process exit code for a bundle: 0, 3 (non-convergence) or 4 (degeneracy).
int exit_code(const ResultBundle& bundle);

}  // namespace lindstat
