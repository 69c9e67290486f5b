/*
 * Copyright 2026 The lapshot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the lapshot transductive few-shot inference library.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return LAPSHOT_OK on success; on failure they return an error
 * code and leave a thread-local message retrievable via lapshot_last_error.
 * Strings returned through char** are owned by the caller and must be
 * released with lapshot_string_free.
 *
 * Configuration is key/value based: keys match the run-config file format
 * (lambda, knn, distance, normalization, rectify_prototypes,
 * shift_correction, symmetrize_affinity, max_iterations, rel_tolerance,
 * ways, shots, queries_per_class, num_episodes, seed, threads,
 * lambda_grid, ...). Unknown keys are rejected.
 */

#ifndef LAPSHOT_H
#define LAPSHOT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#ifdef LAPSHOT_BUILD
#define LAPSHOT_API __declspec(dllexport)
#else
#define LAPSHOT_API __declspec(dllimport)
#endif
#else
#define LAPSHOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lapshot_status {
  LAPSHOT_OK = 0,
  LAPSHOT_ERR_INVALID_ARGUMENT = 1,
  LAPSHOT_ERR_IO = 2,
  LAPSHOT_ERR_PARSE = 3,
  LAPSHOT_ERR_INVALID_TASK = 4,
  LAPSHOT_ERR_NUMERIC = 5,
} lapshot_status;

typedef struct lapshot_features lapshot_features;
typedef struct lapshot_config lapshot_config;
typedef struct lapshot_infer_result lapshot_infer_result;
typedef struct lapshot_bench_report lapshot_bench_report;
typedef struct lapshot_tune_result lapshot_tune_result;

LAPSHOT_API const char* lapshot_version(void);

/* Message for the most recent failure on this thread; never NULL. */
LAPSHOT_API const char* lapshot_last_error(void);

LAPSHOT_API void lapshot_string_free(char* s);

/* ---- features ------------------------------------------------------- */

LAPSHOT_API lapshot_status lapshot_features_create(
    uint32_t rows, uint32_t dim, const double* data /* row-major */,
    const int32_t* labels /* NULL when absent */, lapshot_features** out);

/* Reads .csv by extension, the binary LSFT format otherwise. */
LAPSHOT_API lapshot_status lapshot_features_read(const char* path,
                                                 lapshot_features** out);
LAPSHOT_API lapshot_status lapshot_features_write(const lapshot_features* f,
                                                  const char* path);

/* Gaussian blob generator: per-class centers uniform in
 * [-center_scale, center_scale]^dim, rows = center + N(0, cluster_std^2 I),
 * deterministic under seed. */
LAPSHOT_API lapshot_status lapshot_features_synth(
    uint32_t num_classes, uint32_t dim, double cluster_std,
    double center_scale, uint32_t points_per_class, uint64_t seed,
    lapshot_features** out);

LAPSHOT_API uint32_t lapshot_features_rows(const lapshot_features* f);
LAPSHOT_API uint32_t lapshot_features_dim(const lapshot_features* f);
LAPSHOT_API int lapshot_features_has_labels(const lapshot_features* f);

/* Copies row q (dim doubles) into out. */
LAPSHOT_API lapshot_status lapshot_features_get_row(const lapshot_features* f,
                                                    uint32_t row, double* out);
LAPSHOT_API lapshot_status lapshot_features_get_label(const lapshot_features* f,
                                                      uint32_t row,
                                                      int32_t* out);

LAPSHOT_API void lapshot_features_free(lapshot_features* f);

/* ---- configuration --------------------------------------------------- */

LAPSHOT_API lapshot_status lapshot_config_create(lapshot_config** out);
LAPSHOT_API lapshot_status lapshot_config_load(const char* path,
                                               lapshot_config** out);
LAPSHOT_API lapshot_status lapshot_config_set(lapshot_config* config,
                                              const char* key,
                                              const char* value);
LAPSHOT_API void lapshot_config_free(lapshot_config* config);

/* ---- single-task inference ------------------------------------------- */

LAPSHOT_API lapshot_status lapshot_infer(const lapshot_features* support,
                                         const lapshot_features* query,
                                         const lapshot_config* config,
                                         lapshot_infer_result** out);

LAPSHOT_API uint32_t lapshot_infer_result_count(const lapshot_infer_result* r);
LAPSHOT_API uint32_t lapshot_infer_result_classes(
    const lapshot_infer_result* r);
/* Predicted label of query q, in the original label values. */
LAPSHOT_API int32_t lapshot_infer_result_label(const lapshot_infer_result* r,
                                               uint32_t q);
/* Soft assignment probability for query q and class id c (0..C-1). */
LAPSHOT_API double lapshot_infer_result_probability(
    const lapshot_infer_result* r, uint32_t q, uint32_t c);
LAPSHOT_API uint32_t lapshot_infer_result_iterations(
    const lapshot_infer_result* r);
LAPSHOT_API int lapshot_infer_result_converged(const lapshot_infer_result* r);
LAPSHOT_API int lapshot_infer_result_monotone(const lapshot_infer_result* r);
/* Monitored objective value at iteration i, 0 <= i <= iterations. */
LAPSHOT_API double lapshot_infer_result_objective(
    const lapshot_infer_result* r, uint32_t i);
/* Accuracy against query ground truth; -1 when the query had no labels. */
LAPSHOT_API double lapshot_infer_result_accuracy(const lapshot_infer_result* r);
LAPSHOT_API lapshot_status lapshot_infer_result_render(
    const lapshot_infer_result* r, char** out_text);
LAPSHOT_API lapshot_status lapshot_infer_result_labels_csv(
    const lapshot_infer_result* r, char** out_text);
LAPSHOT_API void lapshot_infer_result_free(lapshot_infer_result* r);

/* ---- episode benchmark ------------------------------------------------ */

/* method: 0 = Laplacian inference, 1 = nearest-prototype baseline. */
LAPSHOT_API lapshot_status lapshot_bench(const lapshot_features* pool,
                                         const lapshot_config* config,
                                         int method,
                                         lapshot_bench_report** out);

LAPSHOT_API double lapshot_bench_report_accuracy(
    const lapshot_bench_report* r);
LAPSHOT_API double lapshot_bench_report_ci95(const lapshot_bench_report* r);
LAPSHOT_API double lapshot_bench_report_mean_iterations(
    const lapshot_bench_report* r);
LAPSHOT_API double lapshot_bench_report_mean_wall_seconds(
    const lapshot_bench_report* r);
LAPSHOT_API lapshot_status lapshot_bench_report_render(
    const lapshot_bench_report* r, int include_episodes, char** out_text);
LAPSHOT_API lapshot_status lapshot_bench_report_render_csv(
    const lapshot_bench_report* r, char** out_text);
LAPSHOT_API void lapshot_bench_report_free(lapshot_bench_report* r);

/* Mean per-episode inference seconds for the Laplacian solve and the
 * nearest-prototype baseline on identical episodes. */
LAPSHOT_API lapshot_status lapshot_time(const lapshot_features* pool,
                                        const lapshot_config* config,
                                        double* mean_seconds_laplacian,
                                        double* mean_seconds_nearest);

/* ---- lambda tuning ----------------------------------------------------- */

/* grid may be NULL (with grid_len 0) to use the built-in default grid. */
LAPSHOT_API lapshot_status lapshot_tune(const lapshot_features* pool,
                                        const lapshot_config* config,
                                        const double* grid, size_t grid_len,
                                        lapshot_tune_result** out);

LAPSHOT_API double lapshot_tune_best_lambda(const lapshot_tune_result* r);
LAPSHOT_API size_t lapshot_tune_size(const lapshot_tune_result* r);
LAPSHOT_API double lapshot_tune_lambda_at(const lapshot_tune_result* r,
                                          size_t i);
LAPSHOT_API double lapshot_tune_accuracy_at(const lapshot_tune_result* r,
                                            size_t i);
LAPSHOT_API lapshot_status lapshot_tune_result_render(
    const lapshot_tune_result* r, char** out_text);
LAPSHOT_API void lapshot_tune_result_free(lapshot_tune_result* r);

#ifdef __cplusplus
}
#endif

#endif /* LAPSHOT_H */
