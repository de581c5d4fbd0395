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

#ifndef LINDSTAT_LINDSTAT_H_
#define LINDSTAT_LINDSTAT_H_

/* C interface to the lindstat shared library. All handles are opaque and
 * owned by the caller; strings returned through char** are released with
 * lindstat_string_free. Every call that can fail returns a status code and
 * stores a message retrievable with lindstat_last_error (per thread). */

#include <stddef.h>

#if defined(LINDSTAT_BUILDING_LIBRARY)
#define LINDSTAT_API __attribute__((visibility("default")))
#else
#define LINDSTAT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lindstat_status {
  LINDSTAT_OK = 0,
  LINDSTAT_E_ARGUMENT = 1,
  LINDSTAT_E_CONFIG = 2,
  LINDSTAT_E_CONVERGENCE = 3,
  LINDSTAT_E_DEGENERACY = 4,
  LINDSTAT_E_SAMPLE_SIZE = 5,
  LINDSTAT_E_EMPTY_SPECTRUM = 6,
  LINDSTAT_E_PARTIAL_RESULT = 7,
  LINDSTAT_E_CATALOG = 8,
  LINDSTAT_E_IO = 9,
  LINDSTAT_E_INTERNAL = 99
} lindstat_status;

typedef enum lindstat_field {
  LINDSTAT_FIELD_ZERO = 0,
  LINDSTAT_FIELD_STAGGERED = 1,
  LINDSTAT_FIELD_EXPLICIT = 2
} lindstat_field;

typedef enum lindstat_ensemble {
  LINDSTAT_POISSON = 0,
  LINDSTAT_GOE = 1,
  LINDSTAT_GUE = 2,
  LINDSTAT_AMBIGUOUS = 3
} lindstat_ensemble;

typedef struct lindstat_model lindstat_model;
typedef struct lindstat_density lindstat_density;
typedef struct lindstat_result lindstat_result;

LINDSTAT_API const char* lindstat_version(void);
LINDSTAT_API const char* lindstat_last_error(void);
LINDSTAT_API void lindstat_string_free(char* s);

/* Chain model. `field` is read only for LINDSTAT_FIELD_EXPLICIT (n values). */
LINDSTAT_API lindstat_status lindstat_model_create(int n, double delta, lindstat_field field_kind,
                                                   const double* field, double gamma, double mu,
                                                   double mu_bar, double dephasing,
                                                   lindstat_model** out);
LINDSTAT_API void lindstat_model_destroy(lindstat_model* model);

LINDSTAT_API lindstat_status lindstat_find_ness(const lindstat_model* model, double tol,
                                                int max_iter, lindstat_density** out);
/* Fills out[0..k-1]; on LINDSTAT_E_PARTIAL_RESULT *found < k modes are valid. */
LINDSTAT_API lindstat_status lindstat_find_decay_modes(const lindstat_model* model, int k,
                                                       double tol, int max_iter,
                                                       lindstat_density** out, int* found);
LINDSTAT_API lindstat_status lindstat_dense_ness(const lindstat_model* model,
                                                 lindstat_density** out);
LINDSTAT_API void lindstat_density_destroy(lindstat_density* rho);

LINDSTAT_API lindstat_status lindstat_density_eigenvalue(const lindstat_density* rho, double* re,
                                                         double* im);
LINDSTAT_API lindstat_status lindstat_density_residual(const lindstat_density* rho,
                                                       double* residual);
LINDSTAT_API lindstat_status lindstat_density_trace_distance(const lindstat_density* a,
                                                             const lindstat_density* b,
                                                             double* out);
/* Writes up to `capacity` ascending eigenvalues; *count receives the number
 * kept (which may exceed capacity), *discarded the numerical zeros. */
LINDSTAT_API lindstat_status lindstat_density_block_spectrum(const lindstat_density* rho,
                                                             int n_up, double zero_cutoff,
                                                             double* values, size_t capacity,
                                                             size_t* count, size_t* discarded);

LINDSTAT_API lindstat_status lindstat_surmise_pdf(lindstat_ensemble e, double s, double* out);
LINDSTAT_API lindstat_status lindstat_surmise_cdf(lindstat_ensemble e, double s, double* out);
/* Unfolds ascending levels and writes the nearest-neighbour spacings. */
LINDSTAT_API lindstat_status lindstat_unfolded_spacings(const double* levels, size_t n,
                                                        int degree, double trim, int use_log,
                                                        double* out, size_t capacity,
                                                        size_t* count);
LINDSTAT_API lindstat_status lindstat_ks_statistic(const double* spacings, size_t n,
                                                   lindstat_ensemble e, double* out);
LINDSTAT_API lindstat_status lindstat_classify(const double* spacings, size_t n, double margin,
                                               lindstat_ensemble* out);

LINDSTAT_API lindstat_status lindstat_presets_json(char** out);
/* scale is "paper" or "desk". */
LINDSTAT_API lindstat_status lindstat_preset_config_json(const char* name, const char* scale,
                                                         char** out);
/* Runs a JSON experiment; returns LINDSTAT_OK even when solves failed, in
 * which case lindstat_result_exit_code is nonzero. */
LINDSTAT_API lindstat_status lindstat_run_experiment_json(const char* config_json,
                                                          lindstat_result** out);
LINDSTAT_API lindstat_status lindstat_result_summary_json(const lindstat_result* result,
                                                          int include_runtime, char** out);
LINDSTAT_API int lindstat_result_exit_code(const lindstat_result* result);
LINDSTAT_API lindstat_status lindstat_result_classification(const lindstat_result* result,
                                                            const char* series_id,
                                                            lindstat_ensemble* out);
LINDSTAT_API lindstat_status lindstat_emit_figure_data(const lindstat_result* result,
                                                       const char* out_dir, double s_max,
                                                       double bin_width);
LINDSTAT_API void lindstat_result_destroy(lindstat_result* result);

#ifdef __cplusplus
}
#endif

#endif  // LINDSTAT_LINDSTAT_H_
