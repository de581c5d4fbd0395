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

#include "lindstat/lindstat.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "lindstat/experiment.hpp"
#include "lindstat/rmtstats.hpp"
#include "lindstat/solvers.hpp"

struct lindstat_model {
  lindstat::ChainModel model;
};

struct lindstat_density {
  lindstat::DensityOperator rho;
};

struct lindstat_result {
  lindstat::ResultBundle bundle;
};

namespace {

thread_local std::string g_last_error;

lindstat_status fail(lindstat_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <typename F>
lindstat_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LINDSTAT_OK;
  } catch (const lindstat::Error& e) {
    return fail(static_cast<lindstat_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LINDSTAT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LINDSTAT_E_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw lindstat::ArgumentError(what);
}

lindstat::Ensemble ensemble_of(lindstat_ensemble e) {
  require(e == LINDSTAT_POISSON || e == LINDSTAT_GOE || e == LINDSTAT_GUE, "unknown ensemble");
  return static_cast<lindstat::Ensemble>(e);
}

lindstat::SpacingSample sample_of(const double* spacings, size_t n) {
  require(spacings != nullptr || n == 0, "null spacings");
  lindstat::SpacingSample s;
  s.spacings.assign(spacings, spacings + n);
  return s;
}

}  // namespace

extern "C" {

const char* lindstat_version(void) { return "0.1.0"; }

const char* lindstat_last_error(void) { return g_last_error.c_str(); }

void lindstat_string_free(char* s) { std::free(s); }

lindstat_status lindstat_model_create(int n, double delta, lindstat_field field_kind,
                                      const double* field, double gamma, double mu, double mu_bar,
                                      double dephasing, lindstat_model** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    lindstat::ChainModel m;
    m.chain.n = n;
    m.chain.delta = delta;
    require(n >= 2 && n <= lindstat::kMaxSites, "n out of range");
    switch (field_kind) {
      case LINDSTAT_FIELD_ZERO: m.chain.field.assign(n, 0.0); break;
      case LINDSTAT_FIELD_STAGGERED: m.chain.field = lindstat::staggered_field(n); break;
      case LINDSTAT_FIELD_EXPLICIT:
        require(field != nullptr, "explicit field requires values");
        m.chain.field.assign(field, field + n);
        break;
      default: require(false, "unknown field kind");
    }
    m.bath = {gamma, mu, mu_bar, dephasing};
    m.validate();
    *out = new lindstat_model{std::move(m)};
  });
}

void lindstat_model_destroy(lindstat_model* model) { delete model; }

lindstat_status lindstat_find_ness(const lindstat_model* model, double tol, int max_iter,
                                   lindstat_density** out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = new lindstat_density{lindstat::find_ness(model->model, tol, max_iter)};
  });
}

lindstat_status lindstat_find_decay_modes(const lindstat_model* model, int k, double tol,
                                          int max_iter, lindstat_density** out, int* found) {
  if (found) *found = 0;
  std::vector<lindstat::DensityOperator> modes;
  lindstat_status status = guarded([&] {
    require(model && out && found, "null argument");
    try {
      modes = lindstat::find_decay_modes(model->model, k, tol, max_iter);
    } catch (const lindstat::PartialResultError& e) {
      modes = e.found;
      throw;
    }
  });
  if (out && found) {
    for (auto& m : modes) out[(*found)++] = new lindstat_density{std::move(m)};
  }
  return status;
}

lindstat_status lindstat_dense_ness(const lindstat_model* model, lindstat_density** out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = new lindstat_density{lindstat::dense_null_space_oracle(model->model)};
  });
}

void lindstat_density_destroy(lindstat_density* rho) { delete rho; }

lindstat_status lindstat_density_eigenvalue(const lindstat_density* rho, double* re, double* im) {
  return guarded([&] {
    require(rho && re && im, "null argument");
    *re = rho->rho.lambda.real();
    *im = rho->rho.lambda.imag();
  });
}

lindstat_status lindstat_density_residual(const lindstat_density* rho, double* residual) {
  return guarded([&] {
    require(rho && residual, "null argument");
    *residual = rho->rho.residual;
  });
}

lindstat_status lindstat_density_trace_distance(const lindstat_density* a,
                                                const lindstat_density* b, double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = lindstat::trace_distance(a->rho, b->rho);
  });
}

lindstat_status lindstat_density_block_spectrum(const lindstat_density* rho, int n_up,
                                                double zero_cutoff, double* values,
                                                size_t capacity, size_t* count,
                                                size_t* discarded) {
  return guarded([&] {
    require(rho && count && discarded, "null argument");
    require(values != nullptr || capacity == 0, "null values buffer");
    const auto s = lindstat::block_spectrum(rho->rho, n_up, zero_cutoff);
    *count = s.values.size();
    *discarded = s.discarded_count;
    std::copy_n(s.values.begin(), std::min(capacity, s.values.size()), values);
  });
}

lindstat_status lindstat_surmise_pdf(lindstat_ensemble e, double s, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = lindstat::surmise_pdf(ensemble_of(e), s);
  });
}

lindstat_status lindstat_surmise_cdf(lindstat_ensemble e, double s, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = lindstat::surmise_cdf(ensemble_of(e), s);
  });
}

lindstat_status lindstat_unfolded_spacings(const double* levels, size_t n, int degree, double trim,
                                           int use_log, double* out, size_t capacity,
                                           size_t* count) {
  return guarded([&] {
    require(count != nullptr && (levels != nullptr || n == 0), "null argument");
    require(out != nullptr || capacity == 0, "null output buffer");
    std::vector<double> v(levels, levels + n);
    const auto u = lindstat::unfold(v, degree, trim, use_log != 0);
    const auto s = lindstat::spacing_sample(u, {});
    *count = s.spacings.size();
    std::copy_n(s.spacings.begin(), std::min(capacity, s.spacings.size()), out);
  });
}

lindstat_status lindstat_ks_statistic(const double* spacings, size_t n, lindstat_ensemble e,
                                      double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = lindstat::ks_statistic(sample_of(spacings, n), ensemble_of(e));
  });
}

lindstat_status lindstat_classify(const double* spacings, size_t n, double margin,
                                  lindstat_ensemble* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = static_cast<lindstat_ensemble>(lindstat::classify(sample_of(spacings, n), margin));
  });
}

lindstat_status lindstat_presets_json(char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = copy_string(lindstat::presets_to_json());
  });
}

lindstat_status lindstat_preset_config_json(const char* name, const char* scale, char** out) {
  return guarded([&] {
    require(name && scale && out, "null argument");
    const auto sc = lindstat::parse_scale(scale);
    if (!sc) throw lindstat::ConfigError(std::string("scale must be paper or desk, got ") + scale);
    *out = copy_string(lindstat::config_to_json(lindstat::preset_config(name, *sc)));
  });
}

lindstat_status lindstat_run_experiment_json(const char* config_json, lindstat_result** out) {
  return guarded([&] {
    require(config_json && out, "null argument");
    auto bundle = lindstat::run_experiment(lindstat::parse_config(config_json));
    if (bundle.failed) g_last_error = bundle.error;
    *out = new lindstat_result{std::move(bundle)};
  });
}

lindstat_status lindstat_result_summary_json(const lindstat_result* result, int include_runtime,
                                             char** out) {
  return guarded([&] {
    require(result && out, "null argument");
    *out = copy_string(result->bundle.summary_json(include_runtime != 0));
  });
}

int lindstat_result_exit_code(const lindstat_result* result) {
  return result ? lindstat::exit_code(result->bundle) : 2;
}

lindstat_status lindstat_result_classification(const lindstat_result* result,
                                               const char* series_id, lindstat_ensemble* out) {
  return guarded([&] {
    require(result && series_id && out, "null argument");
    const auto* s = result->bundle.find(series_id);
    if (!s) throw lindstat::ArgumentError(std::string("no series named ") + series_id);
    if (!s->classification) {
      throw lindstat::SampleSizeError(std::string("series ") + series_id + " is not classified");
    }
    *out = static_cast<lindstat_ensemble>(*s->classification);
  });
}

lindstat_status lindstat_emit_figure_data(const lindstat_result* result, const char* out_dir,
                                          double s_max, double bin_width) {
  return guarded([&] {
    require(result && out_dir, "null argument");
    lindstat::write_outputs(result->bundle, out_dir);
    lindstat::emit_figure_data(result->bundle, out_dir, s_max, bin_width);
  });
}

void lindstat_result_destroy(lindstat_result* result) { delete result; }

}  // extern "C"
