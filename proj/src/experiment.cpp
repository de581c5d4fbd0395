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

#include "lindstat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace lindstat {

using nlohmann::json;

namespace {

const char* to_string(FieldPattern p) {
  switch (p) {
    case FieldPattern::kZero: return "zero";
    case FieldPattern::kStaggered: return "staggered";
    case FieldPattern::kExplicit: return "explicit";
  }
  return "?";
}

const char* to_string(LogUnfolding l) {
  switch (l) {
    case LogUnfolding::kAuto: return "auto";
    case LogUnfolding::kOn: return "on";
    case LogUnfolding::kOff: return "off";
  }
  return "?";
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
    }
  }
}

json config_json(const ExperimentConfig& c) {
  json model = {{"n", c.n},
                {"delta", c.delta},
                {"gamma", c.gamma_drive},
                {"mu", c.mu},
                {"mu_bar", c.mu_bar},
                {"dephasing", c.gamma_deph}};
  if (c.field_pattern == FieldPattern::kExplicit) {
    model["field"] = c.field;
  } else {
    model["field"] = to_string(c.field_pattern);
  }
  if (!c.delta_sweep.empty()) model["delta_sweep"] = c.delta_sweep;
  json target = c.target == ModeKind::kNess ? json{{"kind", "ness"}}
                                            : json{{"kind", "hdm"}, {"k", c.hdm_count}};
  return json{{"name", c.name},
              {"model", model},
              {"sectors", c.sectors},
              {"target", target},
              {"unfolding",
               {{"degree", c.unfolding.degree},
                {"trim", c.unfolding.trim_fraction},
                {"log", c.unfolding.log == LogUnfolding::kAuto ? json("auto") : json(c.unfolding.log == LogUnfolding::kOn)},
                {"zero_cutoff", c.unfolding.zero_cutoff}}},
              {"margin", c.margin},
              {"seed", c.seed},
              {"out_dir", c.out_dir},
              {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"threads", c.threads}};
}

std::string format_delta(double d) {
  std::ostringstream os;
  os << d;
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2 || n > 16) throw ConfigError("n must lie in 2..16 for the sector solver");
  if (field_pattern == FieldPattern::kExplicit && static_cast<int>(field.size()) != n) {
    throw ConfigError("explicit field needs exactly n entries");
  }
  if (sectors.empty()) throw ConfigError("at least one sector is required");
  for (int s : sectors) {
    if (s < 0 || s > n) {
      throw ConfigError("sector n_up=" + std::to_string(s) + " outside 0.." + std::to_string(n));
    }
  }
  if (std::set<int>(sectors.begin(), sectors.end()).size() != sectors.size()) {
    throw ConfigError("duplicate sector");
  }
  if (target == ModeKind::kHdm && hdm_count < 1) throw ConfigError("hdm target needs k >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");
  if (!(margin >= 0.0)) throw ConfigError("margin must be nonnegative");
  if (!(unfolding.zero_cutoff > 0.0 && unfolding.zero_cutoff < 1.0)) {
    throw ConfigError("zero_cutoff must lie in (0, 1)");
  }
  if (unfolding.degree < 1 || unfolding.degree > 20) throw ConfigError("degree must lie in 1..20");
  if (!(unfolding.trim_fraction >= 0.0 && unfolding.trim_fraction <= 0.1)) {
    throw ConfigError("trim must lie in [0, 0.1]");
  }
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  for (double d : deltas()) model_at(d).validate();
}

std::vector<double> ExperimentConfig::deltas() const {
  return delta_sweep.empty() ? std::vector<double>{delta} : delta_sweep;
}

ChainModel ExperimentConfig::model_at(double delta_value) const {
  ChainModel m;
  m.chain.n = n;
  m.chain.delta = delta_value;
  switch (field_pattern) {
    case FieldPattern::kZero: m.chain.field.assign(std::max(n, 0), 0.0); break;
    case FieldPattern::kStaggered: m.chain.field = staggered_field(n); break;
    case FieldPattern::kExplicit: m.chain.field = field; break;
  }
  m.bath.gamma_drive = gamma_drive;
  m.bath.mu = mu;
  m.bath.mu_bar = mu_bar;
  m.bath.gamma_deph = gamma_deph;
  return m;
}

bool ExperimentConfig::use_log(ModeKind kind) const {
  switch (unfolding.log) {
    case LogUnfolding::kOn: return true;
    case LogUnfolding::kOff: return false;
    case LogUnfolding::kAuto: return kind == ModeKind::kNess;
  }
  return false;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j,
             {"name", "model", "sectors", "target", "unfolding", "margin", "seed", "out_dir", "tol",
              "max_iter", "threads"},
             "config");
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", c.name);
  if (!j.contains("model") || !j["model"].is_object()) throw ConfigError("missing 'model' object");
  const json& m = j["model"];
  check_keys(m, {"n", "delta", "field", "gamma", "mu", "mu_bar", "dephasing", "delta_sweep"},
             "model");
  if (!m.contains("n")) throw ConfigError("model.n is required");
  c.n = get_or<int>(m, "n", c.n);
  c.delta = get_or<double>(m, "delta", c.delta);
  c.gamma_drive = get_or<double>(m, "gamma", c.gamma_drive);
  c.mu = get_or<double>(m, "mu", c.mu);
  c.mu_bar = get_or<double>(m, "mu_bar", c.mu_bar);
  c.gamma_deph = get_or<double>(m, "dephasing", c.gamma_deph);
  c.delta_sweep = get_or<std::vector<double>>(m, "delta_sweep", {});
  if (m.contains("field")) {
    const json& f = m["field"];
    if (f.is_string()) {
      const auto s = f.get<std::string>();
      if (s == "zero") {
        c.field_pattern = FieldPattern::kZero;
      } else if (s == "staggered") {
        c.field_pattern = FieldPattern::kStaggered;
      } else {
        throw ConfigError("field must be \"zero\", \"staggered\" or a list, got \"" + s + "\"");
      }
    } else if (f.is_array()) {
      c.field_pattern = FieldPattern::kExplicit;
      c.field = get_or<std::vector<double>>(m, "field", {});
    } else {
      throw ConfigError("field must be a string or a list of numbers");
    }
  }
  c.sectors = get_or<std::vector<int>>(j, "sectors", {});
  if (c.sectors.empty()) c.sectors = {c.n / 2};
  if (j.contains("target")) {
    const json& t = j["target"];
    if (t.is_string()) {
      const auto s = t.get<std::string>();
      if (s != "ness") throw ConfigError("target string must be \"ness\"");
    } else if (t.is_object()) {
      check_keys(t, {"kind", "k"}, "target");
      const auto kind = get_or<std::string>(t, "kind", "ness");
      if (kind == "ness") {
        c.target = ModeKind::kNess;
      } else if (kind == "hdm") {
        c.target = ModeKind::kHdm;
        c.hdm_count = get_or<int>(t, "k", 2);
      } else {
        throw ConfigError("target.kind must be \"ness\" or \"hdm\"");
      }
    } else {
      throw ConfigError("target must be \"ness\" or an object");
    }
  }
  if (j.contains("unfolding")) {
    const json& u = j["unfolding"];
    if (!u.is_object()) throw ConfigError("unfolding must be an object");
    check_keys(u, {"degree", "trim", "log", "zero_cutoff"}, "unfolding");
    c.unfolding.degree = get_or<int>(u, "degree", c.unfolding.degree);
    c.unfolding.trim_fraction = get_or<double>(u, "trim", c.unfolding.trim_fraction);
    c.unfolding.zero_cutoff = get_or<double>(u, "zero_cutoff", c.unfolding.zero_cutoff);
    if (u.contains("log")) {
      const json& l = u["log"];
      if (l.is_boolean()) {
        c.unfolding.log = l.get<bool>() ? LogUnfolding::kOn : LogUnfolding::kOff;
      } else if (l.is_string() && l.get<std::string>() == "auto") {
        c.unfolding.log = LogUnfolding::kAuto;
      } else {
        throw ConfigError("unfolding.log must be true, false or \"auto\"");
      }
    }
  }
  c.margin = get_or<double>(j, "margin", c.margin);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.out_dir = get_or<std::string>(j, "out_dir", c.out_dir);
  c.tol = get_or<double>(j, "tol", c.tol);
  c.max_iter = get_or<int>(j, "max_iter", c.max_iter);
  c.threads = get_or<int>(j, "threads", c.threads);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

std::optional<Scale> parse_scale(std::string_view name) {
  if (name == "paper") return Scale::kPaper;
  if (name == "desk") return Scale::kDesk;
  return std::nullopt;
}

namespace {

struct PresetSpec {
  const char* name;
  const char* description;
  double delta;
  FieldPattern field;
  double gamma, mu, mu_bar, deph;
  std::vector<double> sweep;
  ModeKind target;
  int k;
  int paper_n;
  std::vector<int> paper_sectors;
  int desk_n;
  std::vector<int> desk_sectors;
};

Preset make_preset(const PresetSpec& s) {
  ExperimentConfig base;
  base.name = s.name;
  base.delta = s.delta;
  base.field_pattern = s.field;
  base.gamma_drive = s.gamma;
  base.mu = s.mu;
  base.mu_bar = s.mu_bar;
  base.gamma_deph = s.deph;
  base.delta_sweep = s.sweep;
  base.target = s.target;
  base.hdm_count = s.k;
  Preset p{s.name, s.description, base, base};
  p.paper.n = s.paper_n;
  p.paper.sectors = s.paper_sectors;
  p.desk.n = s.desk_n;
  p.desk.sectors = s.desk_sectors;
  return p;
}

std::vector<Preset> build_catalog() {
  const std::vector<double> grid = {0.5, 1.0, 1.5, 2.0, 3.0};
  const std::vector<PresetSpec> specs = {
      {"fig1a", "XX chain steady state", 0.0, FieldPattern::kZero, 1.0, 0.2, 0.3, 0.0, {},
       ModeKind::kNess, 0, 16, {10}, 10, {4, 5, 6}},
      {"fig1b", "XX chain with dephasing, steady state", 0.0, FieldPattern::kZero, 1.0, 0.2, 0.3,
       1.0, {}, ModeKind::kNess, 0, 14, {7}, 10, {4, 5, 6}},
      {"fig1c", "XXX chain at maximal driving, steady state", 1.0, FieldPattern::kZero, 0.1, 1.0,
       0.0, 0.0, {}, ModeKind::kNess, 0, 20, {5}, 10, {3, 4}},
      {"fig2a", "XXZ chain steady state", 0.5, FieldPattern::kZero, 1.0, 0.2, 0.3, 0.0, {},
       ModeKind::kNess, 0, 14, {7}, 11, {4, 5, 6, 7}},
      {"fig2b", "XXZ chain in a staggered field, steady state", 0.5, FieldPattern::kStaggered, 1.0,
       0.1, 0.0, 0.0, {}, ModeKind::kNess, 0, 14, {7}, 11, {4, 5, 6, 7}},
      {"fig3", "XXZ chain steady state across anisotropies", 0.5, FieldPattern::kZero, 1.0, 0.2,
       0.3, 0.0, grid, ModeKind::kNess, 0, 13, {7}, 9, {3, 4, 5, 6}},
      {"fig4", "XX chain with dephasing, leading decay modes", 0.0, FieldPattern::kZero, 1.0, 0.2,
       0.3, 1.0, {}, ModeKind::kHdm, 2, 13, {7}, 10, {4, 5, 6}},
      {"fig5", "XXZ chain in a staggered field, leading decay modes", 0.5,
       FieldPattern::kStaggered, 1.0, 0.1, 0.0, 0.0, {}, ModeKind::kHdm, 2, 13, {7}, 10,
       {4, 5, 6}},
  };
  std::vector<Preset> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(make_preset(s));
  return out;
}

}  // namespace

const std::vector<Preset>& list_presets() {
  static const std::vector<Preset> catalog = build_catalog();
  return catalog;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : list_presets()) {
    if (p.name == name) return p;
  }
  std::string valid;
  for (const auto& p : list_presets()) valid += (valid.empty() ? "" : ", ") + p.name;
  throw CatalogError("unknown preset '" + std::string(name) + "'; valid presets: " + valid);
}

ExperimentConfig preset_config(std::string_view name, Scale scale) {
  const Preset& p = find_preset(name);
  return scale == Scale::kPaper ? p.paper : p.desk;
}

std::string presets_to_json() {
  json arr = json::array();
  for (const auto& p : list_presets()) {
    arr.push_back({{"name", p.name},
                   {"description", p.description},
                   {"paper", config_json(p.paper)},
                   {"desk", config_json(p.desk)}});
  }
  return arr.dump(2);
}

// ---------------------------------------------------------------------------

const SeriesResult* ResultBundle::find(std::string_view id) const {
  for (const auto& s : series) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

constexpr int kMinClassifiable = 100;

std::string series_id(const ExperimentConfig& c, double delta, ModeKind kind, int index) {
  std::string id = kind == ModeKind::kNess ? "ness" : "hdm" + std::to_string(index);
  if (!c.delta_sweep.empty()) id = "delta" + format_delta(delta) + "_" + id;
  return id;
}

SeriesResult analyse(const ExperimentConfig& c, double delta, const DensityOperator& rho,
                     int index) {
  SeriesResult s;
  s.id = series_id(c, delta, rho.kind, index);
  s.delta = delta;
  s.kind = rho.kind;
  s.mode_index = index;
  s.lambda = rho.lambda;
  s.residual = rho.residual;
  std::vector<SpacingSample> samples;
  for (int n_up : c.sectors) {
    SectorResult r;
    try {
      r.spectrum = block_spectrum(rho, n_up, c.unfolding.zero_cutoff);
      r.spectrum.source = {s.id, n_up, rho.kind, index};
      r.unfolded = unfold(r.spectrum, c.unfolding.degree, c.unfolding.trim_fraction,
                          c.use_log(rho.kind));
      r.sample = spacing_sample(r.unfolded, {s.id, n_up, r.spectrum.values.size(),
                                             r.spectrum.discarded_count});
      samples.push_back(r.sample);
    } catch (const Error& e) {
      r.spectrum.source = {s.id, n_up, rho.kind, index};
      r.error = e.what();
    }
    s.sectors.push_back(std::move(r));
  }
  s.pooled = pool(samples);
  if (!s.pooled.empty()) s.ks = ks_all(s.pooled);
  if (s.pooled.size() >= static_cast<std::size_t>(kMinClassifiable)) {
    s.classification = classify(s.pooled, c.margin);
  }
  return s;
}

SeriesResult failed_series(const ExperimentConfig& c, double delta, ModeKind kind, int index,
                           const std::string& what) {
  SeriesResult s;
  s.id = series_id(c, delta, kind, index);
  s.delta = delta;
  s.kind = kind;
  s.mode_index = index;
  s.failed = true;
  s.error = what;
  return s;
}

struct PointOutcome {
  std::vector<SeriesResult> series;
  std::optional<ErrorCode> error;
  std::string message;
};

PointOutcome run_point(const ExperimentConfig& c, double delta) {
  PointOutcome out;
  auto fail = [&](ErrorCode code, const std::string& what) {
    if (!out.error) {
      out.error = code;
      out.message = what;
    }
  };
  SolverOptions opt;
  opt.tol = c.tol;
  opt.max_iter = c.max_iter;
  opt.seed = c.seed;
  std::optional<SectorProblem> problem;
  try {
    problem.emplace(c.model_at(delta));
    out.series.push_back(analyse(c, delta, problem->ness(opt), 0));
  } catch (const Error& e) {
    out.series.push_back(failed_series(c, delta, ModeKind::kNess, 0, e.what()));
    fail(e.code(), e.what());
  }
  if (c.target == ModeKind::kHdm && problem) {
    std::vector<DensityOperator> modes;
    try {
      modes = problem->decay_modes(c.hdm_count, opt);
    } catch (const PartialResultError& e) {
      modes = e.found;
      fail(e.code(), e.what());
    } catch (const Error& e) {
      fail(e.code(), e.what());
    }
    for (int m = 1; m <= c.hdm_count; ++m) {
      if (m <= static_cast<int>(modes.size())) {
        out.series.push_back(analyse(c, delta, modes[m - 1], m));
      } else {
        out.series.push_back(failed_series(c, delta, ModeKind::kHdm, m,
                                           out.message.empty() ? "mode not found" : out.message));
      }
    }
  }
  return out;
}

}  // namespace

ResultBundle run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto deltas = config.deltas();
  std::vector<PointOutcome> outcomes(deltas.size());

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(deltas.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < deltas.size(); i = next++) {
      outcomes[i] = run_point(config, deltas[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ResultBundle bundle;
  bundle.config = config;
  for (auto& o : outcomes) {
    if (o.error && !bundle.failed) {
      bundle.failed = true;
      bundle.first_error = *o.error;
      bundle.error = o.message;
    }
    for (auto& s : o.series) bundle.series.push_back(std::move(s));
  }
  bundle.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.out_dir.empty()) {
    write_outputs(bundle, config.out_dir);
    emit_figure_data(bundle, config.out_dir);
  }
  return bundle;
}

namespace {

json series_json(const SeriesResult& s, const ExperimentConfig& c) {
  json sectors = json::array();
  std::vector<UnfoldedSpectrum> unfolded;
  for (const auto& r : s.sectors) {
    json js = {{"n_up", r.spectrum.source.n_up},
               {"level_count", r.spectrum.values.size()},
               {"discarded_count", r.spectrum.discarded_count},
               {"degenerate_pairs", r.spectrum.degenerate_pairs},
               {"spacing_count", r.sample.size()},
               {"trimmed_per_edge", r.unfolded.trimmed}};
    if (!r.error.empty()) js["error"] = r.error;
    if (r.error.empty() && !r.unfolded.degenerate) unfolded.push_back(r.unfolded);
    sectors.push_back(js);
  }
  json j = {{"id", s.id},
            {"kind", to_string(s.kind)},
            {"mode_index", s.mode_index},
            {"delta", s.delta},
            {"lambda", {s.lambda.real(), s.lambda.imag()}},
            {"residual", s.residual},
            {"failed", s.failed},
            {"sectors", sectors},
            {"unfolding",
             {{"method", to_string(c.use_log(s.kind) ? UnfoldMethod::kLogPolynomial
                                                     : UnfoldMethod::kPolynomial)},
              {"degree", c.unfolding.degree},
              {"trim", c.unfolding.trim_fraction},
              {"zero_cutoff", c.unfolding.zero_cutoff}}},
            {"pooled_spacings", s.pooled.size()}};
  if (!s.error.empty()) j["error"] = s.error;
  if (!s.pooled.empty()) {
    j["ks"] = {{"poisson", s.ks[0]}, {"goe", s.ks[1]}, {"gue", s.ks[2]}};
  }
  j["classification"] = s.classification ? json(to_string(*s.classification)) : json(nullptr);
  json nv = json::object();
  for (int length : {1, 2, 3}) {
    try {
      if (!unfolded.empty()) {
        nv[std::to_string(length)] = pooled_number_variance(unfolded, length, 4000, c.seed);
      }
    } catch (const Error&) {
    }
  }
  j["number_variance"] = nv;
  return j;
}

std::string metadata_lines(const ResultBundle& bundle) {
  std::ostringstream os;
  const auto& c = bundle.config;
  os << "# config=" << c.name << " n=" << c.n << " seed=" << c.seed << "\n";
  os << "# unfolding=" << to_string(c.unfolding.log) << " (ness:"
     << to_string(c.use_log(ModeKind::kNess) ? UnfoldMethod::kLogPolynomial
                                             : UnfoldMethod::kPolynomial)
     << ", hdm:"
     << to_string(c.use_log(ModeKind::kHdm) ? UnfoldMethod::kLogPolynomial
                                            : UnfoldMethod::kPolynomial)
     << ") degree=" << c.unfolding.degree << " trim=" << c.unfolding.trim_fraction
     << " zero_cutoff=" << c.unfolding.zero_cutoff << "\n";
  for (const auto& s : bundle.series) {
    for (const auto& r : s.sectors) {
      os << "# discarded model_id=" << s.id << " n_up=" << r.spectrum.source.n_up
         << " count=" << r.spectrum.discarded_count << "\n";
    }
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::filesystem::path prepare_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  return dir;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_histogram(const std::filesystem::path& path, const std::string& meta,
                     const SpacingSample& sample, double s_max, double bin_width) {
  std::ostringstream os;
  os << meta << "bin_center,density\n";
  for (const auto& b : spacing_histogram(sample, bin_width, s_max)) {
    os << csv_number(b.center) << "," << csv_number(b.density) << "\n";
  }
  write_file(path, os.str());
}

}  // namespace

std::string ResultBundle::summary_json(bool include_runtime) const {
  json series_arr = json::array();
  for (const auto& s : series) series_arr.push_back(series_json(s, config));
  json j = {{"config", config_json(config)}, {"failed", failed}, {"series", series_arr}};
  if (failed) {
    j["error"] = error;
    j["error_code"] = static_cast<int>(first_error);
  }
  if (include_runtime) j["runtime"] = {{"wall_seconds", wall_seconds}};
  return j.dump(2);
}

void write_outputs(const ResultBundle& bundle, const std::string& out_dir) {
  const auto dir = prepare_dir(out_dir);
  write_file(dir / "summary.json", bundle.summary_json() + "\n");
  std::ostringstream os;
  os << metadata_lines(bundle) << "model_id,n_up,index,spacing\n";
  for (const auto& s : bundle.series) {
    for (const auto& r : s.sectors) {
      for (std::size_t i = 0; i < r.sample.spacings.size(); ++i) {
        os << s.id << "," << r.spectrum.source.n_up << "," << i << ","
           << csv_number(r.sample.spacings[i]) << "\n";
      }
    }
  }
  write_file(dir / "spacings.csv", os.str());
}

void emit_figure_data(const ResultBundle& bundle, const std::string& out_dir, double s_max,
                      double bin_width) {
  if (!(s_max > 0.0) || !(bin_width > 0.0)) throw ArgumentError("s_max and bin_width must be > 0");
  const auto dir = prepare_dir(out_dir);
  const std::string meta = metadata_lines(bundle);
  std::vector<SpacingSample> all;
  for (const auto& s : bundle.series) {
    if (s.failed) continue;
    all.push_back(s.pooled);
    write_histogram(dir / ("histogram_" + s.id + ".csv"), meta, s.pooled, s_max, bin_width);
  }
  // The combined histogram uses the first series (the steady state of the
  // first parameter point); per-series files cover the rest.
  write_histogram(dir / "histogram.csv", meta, all.empty() ? SpacingSample{} : all.front(), s_max,
                  bin_width);
  std::ostringstream os;
  os << meta << "s,poisson,goe,gue\n";
  const int points = static_cast<int>(std::lround(s_max / 0.01));
  for (int i = 0; i <= points; ++i) {
    const double s = s_max * i / points;
    os << csv_number(s);
    for (auto e : kAllEnsembles) os << "," << csv_number(surmise_pdf(e, s));
    os << "\n";
  }
  write_file(dir / "surmise_curves.csv", os.str());
}

int exit_code(const ResultBundle& bundle) {
  if (!bundle.failed) return 0;
  switch (bundle.first_error) {
    case ErrorCode::kDegeneracy: return 4;
    case ErrorCode::kConfig:
    case ErrorCode::kArgument: return 2;
    default: return 3;
  }
}

}  // namespace lindstat
