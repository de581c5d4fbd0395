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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lindstat/experiment.hpp"

using namespace lindstat;
namespace fs = std::filesystem;

namespace {

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lindstat_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.n = 7;
  c.delta = 0.5;
  c.mu = 0.2;
  c.mu_bar = 0.3;
  c.sectors = {3, 4};
  return c;
}

// Finds a CSV data row whose first column matches `key`.
std::vector<double> csv_row(const std::string& text, double key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || !std::isdigit(static_cast<unsigned char>(line[0]))) {
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (std::abs(row[0] - key) < 1e-12) return row;
  }
  return {};
}

SeriesResult synthetic_series(Ensemble e, const std::string& id) {
  std::vector<SpacingSample> parts;
  for (const auto& s : generate_synthetic(e, 200, 30, 3)) {
    parts.push_back(spacing_sample(unfold(s, 6, 0.02, false), {id, 0, s.values.size(), 0}));
  }
  SeriesResult r;
  r.id = id;
  r.pooled = pool(parts);
  r.ks = ks_all(r.pooled);
  r.classification = classify(r.pooled);
  return r;
}

}  // namespace

TEST_CASE("preset catalog") {
  const auto& presets = list_presets();
  std::vector<std::string> names;
  for (const auto& p : presets) names.push_back(p.name);
  CHECK(names == std::vector<std::string>{"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig3",
                                          "fig4", "fig5"});
  for (const auto& p : presets) {
    CHECK(p.desk.n <= 11);
    CHECK_NOTHROW(p.desk.validate());
    CHECK(p.paper.delta == p.desk.delta);
    CHECK(p.paper.mu == p.desk.mu);
    CHECK(p.paper.mu_bar == p.desk.mu_bar);
    CHECK(p.paper.gamma_drive == p.desk.gamma_drive);
    CHECK(p.paper.gamma_deph == p.desk.gamma_deph);
    CHECK(p.paper.n >= 13);
  }
  const auto c = preset_config("fig1c", Scale::kPaper);
  CHECK(c.delta == 1.0);
  CHECK(c.mu == 1.0);
  CHECK(c.mu_bar == 0.0);
  CHECK(c.gamma_drive == 0.1);
  CHECK(c.n == 20);
  CHECK(c.sectors == std::vector<int>{5});
  CHECK(preset_config("fig1a", Scale::kPaper).n == 16);
  CHECK(preset_config("fig1a", Scale::kPaper).sectors == std::vector<int>{10});
  const auto sweep = preset_config("fig3", Scale::kDesk).delta_sweep;
  for (double d : {0.5, 1.5, 3.0}) CHECK(std::count(sweep.begin(), sweep.end(), d) == 1);
  CHECK(preset_config("fig2b", Scale::kDesk).field_pattern == FieldPattern::kStaggered);
  CHECK(preset_config("fig4", Scale::kDesk).target == ModeKind::kHdm);
  CHECK(preset_config("fig4", Scale::kDesk).hdm_count == 2);
  try {
    find_preset("fig9");
    FAIL("expected CatalogError");
  } catch (const CatalogError& e) {
    const std::string what = e.what();
    for (const auto& n : names) CHECK(what.find(n) != std::string::npos);
  }
  CHECK(nlohmann::json::parse(presets_to_json()).size() == presets.size());
  CHECK(parse_scale("desk") == Scale::kDesk);
  CHECK_FALSE(parse_scale("huge").has_value());
}

TEST_CASE("config parsing and validation") {
  const auto c = parse_config(R"({
    "name": "t", "model": {"n": 6, "delta": 0.5, "field": "staggered", "gamma": 1,
                           "mu": 0.1, "mu_bar": 0, "dephasing": 0.5},
    "sectors": [2, 3], "target": {"kind": "hdm", "k": 3},
    "unfolding": {"degree": 5, "trim": 0.05, "log": false, "zero_cutoff": 1e-10},
    "seed": 9, "tol": 1e-9, "max_iter": 300})");
  CHECK(c.n == 6);
  CHECK(c.field_pattern == FieldPattern::kStaggered);
  CHECK(c.gamma_deph == 0.5);
  CHECK(c.target == ModeKind::kHdm);
  CHECK(c.hdm_count == 3);
  CHECK(c.unfolding.degree == 5);
  CHECK(c.unfolding.log == LogUnfolding::kOff);
  CHECK(c.seed == 9);
  CHECK(c.max_iter == 300);
  CHECK(c.model_at(0.5).chain.field == staggered_field(6));
  CHECK_NOTHROW(c.validate());

  const auto round = parse_config(config_to_json(c));
  CHECK(config_to_json(round) == config_to_json(c));

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"n": 4}, "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"n": 4, "field": "random"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sectors": [1]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"n": "four"}})"), ConfigError);

  auto bad = parse_config(R"({"model": {"n": 4, "mu": 0.5, "mu_bar": 0.6}})");
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  CHECK_THROWS_AS(run_experiment(bad), ArgumentError);
  auto out_of_range = small_config();
  out_of_range.sectors = {8};
  CHECK_THROWS_AS(out_of_range.validate(), ConfigError);
  auto neg_tol = small_config();
  neg_tol.tol = -1.0;
  CHECK_THROWS_AS(neg_tol.validate(), ConfigError);
  auto too_big = small_config();
  too_big.n = 20;
  too_big.sectors = {5};
  CHECK_THROWS_AS(too_big.validate(), ConfigError);
}

TEST_CASE("experiment run writes annotated, deterministic outputs") {
  auto c = small_config();
  const fs::path dir = scratch("run");
  c.out_dir = dir.string();
  const auto bundle = run_experiment(c);
  CHECK_FALSE(bundle.failed);
  CHECK(exit_code(bundle) == 0);
  REQUIRE(bundle.series.size() == 1);
  const auto& s = bundle.series.front();
  CHECK(s.id == "ness");
  REQUIRE(s.sectors.size() == 2);
  CHECK(s.sectors[0].spectrum.values.size() + s.sectors[0].spectrum.discarded_count == 35);
  CHECK(s.pooled.size() == s.sectors[0].sample.size() + s.sectors[1].sample.size());

  for (const char* f : {"summary.json", "spacings.csv", "histogram.csv", "histogram_ness.csv",
                        "surmise_curves.csv"}) {
    REQUIRE(fs::exists(dir / f));
  }
  for (const char* f : {"spacings.csv", "histogram.csv", "surmise_curves.csv"}) {
    const std::string text = read(dir / f);
    CHECK(text.find("# unfolding=") != std::string::npos);
    CHECK(text.find("degree=6") != std::string::npos);
    CHECK(text.find("trim=0.02") != std::string::npos);
    CHECK(text.find("zero_cutoff=1e-12") != std::string::npos);
    CHECK(text.find("# discarded model_id=ness n_up=3") != std::string::npos);
  }
  CHECK(read(dir / "spacings.csv").find("model_id,n_up,index,spacing\nness,3,0,") !=
        std::string::npos);

  const auto summary = nlohmann::json::parse(read(dir / "summary.json"));
  CHECK(summary["config"]["model"]["n"] == 7);
  CHECK(summary["failed"] == false);
  CHECK(summary["runtime"].contains("wall_seconds"));
  const auto& js = summary["series"][0];
  CHECK(js["sectors"][0]["level_count"].get<int>() > 0);
  CHECK(js["sectors"][0].contains("discarded_count"));
  CHECK(js["ks"].contains("gue"));
  CHECK(js["unfolding"]["method"] == "log_polynomial");
  CHECK(js["residual"].get<double>() < 1e-10);

  const auto again = run_experiment(c);
  CHECK(again.summary_json(false) == bundle.summary_json(false));
  fs::remove_all(dir);
}

TEST_CASE("failed solves are recorded") {
  auto c = small_config();
  c.max_iter = 1;
  c.tol = 1e-14;
  const fs::path dir = scratch("failed");
  c.out_dir = dir.string();
  const auto bundle = run_experiment(c);
  CHECK(bundle.failed);
  CHECK(exit_code(bundle) == 3);
  REQUIRE(bundle.series.size() == 1);
  CHECK(bundle.series[0].failed);
  const auto summary = nlohmann::json::parse(read(dir / "summary.json"));
  CHECK(summary["failed"] == true);
  CHECK(summary["series"][0]["failed"] == true);
  CHECK(summary["error_code"] == 3);
  fs::remove_all(dir);
}

TEST_CASE("decay-mode targets add one series per mode") {
  auto c = small_config();
  c.n = 6;
  c.sectors = {2, 3};
  c.target = ModeKind::kHdm;
  c.hdm_count = 2;
  c.gamma_deph = 1.0;
  c.delta = 0.0;
  const auto bundle = run_experiment(c);
  REQUIRE(bundle.series.size() == 3);
  CHECK(bundle.find("hdm1") != nullptr);
  CHECK(bundle.find("hdm2")->lambda.real() < bundle.find("hdm1")->lambda.real());
  CHECK_FALSE(c.use_log(ModeKind::kHdm));
  CHECK(c.use_log(ModeKind::kNess));
}

TEST_CASE("parameter sweeps label their series") {
  auto c = small_config();
  c.n = 5;
  c.sectors = {2};
  c.delta_sweep = {0.5, 2.0};
  c.threads = 2;
  const auto bundle = run_experiment(c);
  REQUIRE(bundle.series.size() == 2);
  CHECK(bundle.series[0].id == "delta0.5_ness");
  CHECK(bundle.series[1].id == "delta2_ness");
  CHECK(bundle.series[1].delta == 2.0);
}

TEST_CASE("figure data") {
  ResultBundle bundle;
  bundle.config = small_config();
  bundle.series.push_back(synthetic_series(Ensemble::kPoisson, "poisson"));
  bundle.series.push_back(synthetic_series(Ensemble::kGUE, "gue"));
  const fs::path dir = scratch("figure");
  emit_figure_data(bundle, dir.string(), 4.0, 0.1);

  const auto curves = read(dir / "surmise_curves.csv");
  CHECK(curves.find("s,poisson,goe,gue") != std::string::npos);
  const auto row = csv_row(curves, 1.0);
  REQUIRE(row.size() == 4);
  CHECK(std::abs(row[3] - 0.9076) < 1e-4);
  CHECK(row[1] == doctest::Approx(std::exp(-1.0)));

  const auto poisson = csv_row(read(dir / "histogram_poisson.csv"), 0.05);
  REQUIRE(poisson.size() == 2);
  CHECK(std::abs(poisson[1] - 1.0) < 0.15);
  const auto gue = csv_row(read(dir / "histogram_gue.csv"), 0.05);
  REQUIRE(gue.size() == 2);
  CHECK(gue[1] < 0.05);
  CHECK(read(dir / "histogram.csv") == read(dir / "histogram_poisson.csv"));
  fs::remove_all(dir);
}
