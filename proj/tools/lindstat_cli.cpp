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

// Command-line experiment runner built on the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lindstat/lindstat.h"

namespace {

constexpr int kExitConfig = 2;

struct CString {
  char* p = nullptr;
  ~CString() { lindstat_string_free(p); }
};

int config_failure(const std::string& what) {
  std::cerr << "lindstat: " << what << "\n";
  return kExitConfig;
}

std::string status_message(lindstat_status s) {
  return std::string(lindstat_last_error()) + " (status " + std::to_string(static_cast<int>(s)) +
         ")";
}

void print_series(const nlohmann::json& summary) {
  for (const auto& s : summary["series"]) {
    std::cout << s["id"].get<std::string>() << ": ";
    if (s["failed"].get<bool>()) {
      std::cout << "FAILED " << s.value("error", std::string()) << "\n";
      continue;
    }
    std::cout << "spacings=" << s["pooled_spacings"];
    if (s.contains("ks")) {
      std::cout << " ks(poisson)=" << s["ks"]["poisson"] << " ks(goe)=" << s["ks"]["goe"]
                << " ks(gue)=" << s["ks"]["gue"];
    }
    std::cout << " class="
              << (s["classification"].is_null() ? std::string("none")
                                                : s["classification"].get<std::string>())
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-spacing statistics of boundary-driven spin chain steady states"};
  std::string config_path, preset, scale = "desk", out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_iter, threads;
  double s_max = 4.0, bin_width = 0.1;
  bool list = false, print_config = false;

  auto* cfg = app.add_option("--config", config_path, "JSON experiment file")->check(
      CLI::ExistingFile);
  auto* pre = app.add_option("--preset", preset, "named preset (see --list-presets)");
  cfg->excludes(pre);
  app.add_option("--scale", scale, "preset scale")->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", max_iter, "solver iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "worker threads for parameter sweeps");
  app.add_option("--s-max", s_max, "histogram range")->check(CLI::PositiveNumber);
  app.add_option("--bin-width", bin_width, "histogram bin width")->check(CLI::PositiveNumber);
  app.add_flag("--list-presets", list, "print the preset catalog as JSON and exit");
  app.add_flag("--print-config", print_config, "print the resolved config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (list) {
    CString s;
    const auto st = lindstat_presets_json(&s.p);
    if (st != LINDSTAT_OK) return config_failure(status_message(st));
    std::cout << s.p << "\n";
    return 0;
  }

  nlohmann::json config;
  try {
    if (!preset.empty()) {
      CString s;
      const auto st = lindstat_preset_config_json(preset.c_str(), scale.c_str(), &s.p);
      if (st != LINDSTAT_OK) return config_failure(status_message(st));
      config = nlohmann::json::parse(s.p);
    } else if (!config_path.empty()) {
      std::ifstream in(config_path);
      config = nlohmann::json::parse(in);
    } else {
      return config_failure("one of --config or --preset is required");
    }
  } catch (const nlohmann::json::exception& e) {
    return config_failure(std::string("invalid config: ") + e.what());
  }
  if (!config.is_object()) return config_failure("config must be a JSON object");

  if (!out_dir.empty()) config["out_dir"] = out_dir;
  if (config.value("out_dir", std::string()).empty()) {
    config["out_dir"] = "lindstat_out/" + config.value("name", std::string("custom"));
  }
  if (seed) config["seed"] = *seed;
  if (tol) config["tol"] = *tol;
  if (max_iter) config["max_iter"] = *max_iter;
  if (threads) config["threads"] = *threads;

  if (print_config) {
    std::cout << config.dump(2) << "\n";
    return 0;
  }

  lindstat_result* raw = nullptr;
  const auto st = lindstat_run_experiment_json(config.dump().c_str(), &raw);
  if (st != LINDSTAT_OK) {
    std::cerr << "lindstat: " << status_message(st) << "\n";
    switch (st) {
      case LINDSTAT_E_CONVERGENCE:
      case LINDSTAT_E_PARTIAL_RESULT: return 3;
      case LINDSTAT_E_DEGENERACY: return 4;
      case LINDSTAT_E_IO:
      case LINDSTAT_E_INTERNAL: return 1;
      default: return kExitConfig;
    }
  }
  std::unique_ptr<lindstat_result, decltype(&lindstat_result_destroy)> result(
      raw, &lindstat_result_destroy);
  const std::string dir = config["out_dir"].get<std::string>();
  if (const auto e = lindstat_emit_figure_data(result.get(), dir.c_str(), s_max, bin_width);
      e != LINDSTAT_OK) {
    std::cerr << "lindstat: " << status_message(e) << "\n";
    return 1;
  }
  const int rc = lindstat_result_exit_code(result.get());
  CString summary;
  if (lindstat_result_summary_json(result.get(), 1, &summary.p) == LINDSTAT_OK) {
    const auto j = nlohmann::json::parse(summary.p);
    print_series(j);
    if (rc != 0) std::cerr << "lindstat: " << j.value("error", std::string("run failed")) << "\n";
  }
  std::cout << "outputs written to " << dir << "\n";
  return rc;
}
