// Copyright 2026 The lapshot Authors
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

#define LAPSHOT_BUILD
#include "lapshot.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <span>
#include <string>

#include "lapshot/bench.hpp"
#include "lapshot/core.hpp"
#include "lapshot/io.hpp"
#include "lapshot/pipeline.hpp"

struct lapshot_features {
  lapshot::FeatureMatrix m;
};

struct lapshot_config {
  lapshot::RunConfig rc;
};

struct lapshot_infer_result {
  lapshot::PipelineResult r;
  lapshot::InferenceConfig config;
  std::vector<std::string> query_ids;
  double wall_seconds = 0.0;
};

struct lapshot_bench_report {
  lapshot::EpisodeReport rep;
};

struct lapshot_tune_result {
  lapshot::TuneResult t;
};

namespace {

thread_local std::string g_last_error;

lapshot_status status_from(const lapshot::Error& e) {
  using lapshot::ErrorCode;
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
      return LAPSHOT_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo:
      return LAPSHOT_ERR_IO;
    case ErrorCode::kParse:
      return LAPSHOT_ERR_PARSE;
    case ErrorCode::kNumeric:
      return LAPSHOT_ERR_NUMERIC;
    case ErrorCode::kInvalidTask:
    case ErrorCode::kDimMismatch:
    case ErrorCode::kGraphTooSmall:
    case ErrorCode::kMissingBaseMean:
    case ErrorCode::kSampling:
      return LAPSHOT_ERR_INVALID_TASK;
  }
  return LAPSHOT_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
lapshot_status guarded(Fn&& fn) {
  try {
    fn();
    return LAPSHOT_OK;
  } catch (const lapshot::Error& e) {
    g_last_error = e.what();
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LAPSHOT_ERR_INVALID_ARGUMENT;
  }
}

lapshot_status fail_argument(const char* message) {
  g_last_error = message;
  return LAPSHOT_ERR_INVALID_ARGUMENT;
}

void assign_string(char** out_text, const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.data(), text.size() + 1);
  *out_text = out;
}

}  // namespace

extern "C" {

const char* lapshot_version(void) { return "1.0.0"; }

const char* lapshot_last_error(void) { return g_last_error.c_str(); }

void lapshot_string_free(char* s) { std::free(s); }

/* ---- features ---- */

lapshot_status lapshot_features_create(uint32_t rows, uint32_t dim,
                                       const double* data,
                                       const int32_t* labels,
                                       lapshot_features** out) {
  if (out == nullptr || data == nullptr) {
    return fail_argument("features_create: null pointer");
  }
  return guarded([&] {
    auto f = std::make_unique<lapshot_features>();
    f->m.data = lapshot::Matrix(rows, dim);
    std::copy(data, data + static_cast<std::size_t>(rows) * dim,
              f->m.data.values().begin());
    if (labels != nullptr) {
      f->m.labels = std::vector<std::int32_t>(labels, labels + rows);
    }
    f->m.validate("features_create");
    *out = f.release();
  });
}

lapshot_status lapshot_features_read(const char* path, lapshot_features** out) {
  if (out == nullptr || path == nullptr) {
    return fail_argument("features_read: null pointer");
  }
  return guarded([&] {
    auto f = std::make_unique<lapshot_features>();
    f->m = lapshot::read_features(path);
    *out = f.release();
  });
}

lapshot_status lapshot_features_write(const lapshot_features* f,
                                      const char* path) {
  if (f == nullptr || path == nullptr) {
    return fail_argument("features_write: null pointer");
  }
  return guarded([&] { lapshot::write_features(f->m, path); });
}

lapshot_status lapshot_features_synth(uint32_t num_classes, uint32_t dim,
                                      double cluster_std, double center_scale,
                                      uint32_t points_per_class, uint64_t seed,
                                      lapshot_features** out) {
  if (out == nullptr) {
    return fail_argument("features_synth: null pointer");
  }
  return guarded([&] {
    lapshot::SyntheticSpec spec;
    spec.num_classes = static_cast<int>(num_classes);
    spec.dim = static_cast<int>(dim);
    spec.cluster_std = cluster_std;
    spec.center_scale = center_scale;
    spec.points_per_class = static_cast<int>(points_per_class);
    spec.seed = seed;
    auto f = std::make_unique<lapshot_features>();
    f->m = lapshot::generate_synthetic(spec);
    *out = f.release();
  });
}

uint32_t lapshot_features_rows(const lapshot_features* f) {
  return f == nullptr ? 0 : static_cast<uint32_t>(f->m.rows());
}

uint32_t lapshot_features_dim(const lapshot_features* f) {
  return f == nullptr ? 0 : static_cast<uint32_t>(f->m.dim());
}

int lapshot_features_has_labels(const lapshot_features* f) {
  return (f != nullptr && f->m.has_labels()) ? 1 : 0;
}

lapshot_status lapshot_features_get_row(const lapshot_features* f,
                                        uint32_t row, double* out) {
  if (f == nullptr || out == nullptr) {
    return fail_argument("features_get_row: null pointer");
  }
  if (row >= f->m.rows()) {
    return fail_argument("features_get_row: row out of range");
  }
  const auto r = f->m.row(row);
  std::copy(r.begin(), r.end(), out);
  return LAPSHOT_OK;
}

lapshot_status lapshot_features_get_label(const lapshot_features* f,
                                          uint32_t row, int32_t* out) {
  if (f == nullptr || out == nullptr) {
    return fail_argument("features_get_label: null pointer");
  }
  if (!f->m.has_labels()) {
    return fail_argument("features_get_label: features have no labels");
  }
  if (row >= f->m.rows()) {
    return fail_argument("features_get_label: row out of range");
  }
  *out = (*f->m.labels)[row];
  return LAPSHOT_OK;
}

void lapshot_features_free(lapshot_features* f) { delete f; }

/* ---- configuration ---- */

lapshot_status lapshot_config_create(lapshot_config** out) {
  if (out == nullptr) {
    return fail_argument("config_create: null pointer");
  }
  return guarded([&] { *out = new lapshot_config(); });
}

lapshot_status lapshot_config_load(const char* path, lapshot_config** out) {
  if (out == nullptr || path == nullptr) {
    return fail_argument("config_load: null pointer");
  }
  return guarded([&] {
    auto c = std::make_unique<lapshot_config>();
    c->rc = lapshot::parse_run_config(path);
    *out = c.release();
  });
}

lapshot_status lapshot_config_set(lapshot_config* config, const char* key,
                                  const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail_argument("config_set: null pointer");
  }
  return guarded([&] { lapshot::apply_config_entry(config->rc, key, value); });
}

void lapshot_config_free(lapshot_config* config) { delete config; }

/* ---- single-task inference ---- */

lapshot_status lapshot_infer(const lapshot_features* support,
                             const lapshot_features* query,
                             const lapshot_config* config,
                             lapshot_infer_result** out) {
  if (support == nullptr || query == nullptr || config == nullptr ||
      out == nullptr) {
    return fail_argument("infer: null pointer");
  }
  return guarded([&] {
    lapshot::FewShotTask task;
    task.support = support->m;
    task.query = query->m;
    auto result = std::make_unique<lapshot_infer_result>();
    result->config = config->rc.inference;
    result->query_ids = query->m.ids;
    const auto start = std::chrono::steady_clock::now();
    result->r = lapshot::run_pipeline(task, config->rc.inference,
                                      lapshot::Method::kLaplacian);
    result->wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    *out = result.release();
  });
}

uint32_t lapshot_infer_result_count(const lapshot_infer_result* r) {
  return r == nullptr ? 0
                      : static_cast<uint32_t>(r->r.predicted_labels.size());
}

uint32_t lapshot_infer_result_classes(const lapshot_infer_result* r) {
  return r == nullptr ? 0 : static_cast<uint32_t>(r->r.label_map.size());
}

int32_t lapshot_infer_result_label(const lapshot_infer_result* r, uint32_t q) {
  if (r == nullptr || q >= r->r.predicted_labels.size()) return INT32_MIN;
  return r->r.predicted_labels[q];
}

double lapshot_infer_result_probability(const lapshot_infer_result* r,
                                        uint32_t q, uint32_t c) {
  if (r == nullptr || q >= r->r.result.assignment.rows() ||
      c >= r->r.result.assignment.classes()) {
    return -1.0;
  }
  return r->r.result.assignment.probabilities(q, c);
}

uint32_t lapshot_infer_result_iterations(const lapshot_infer_result* r) {
  return r == nullptr ? 0 : static_cast<uint32_t>(r->r.result.trace.iterations);
}

int lapshot_infer_result_converged(const lapshot_infer_result* r) {
  return (r != nullptr && r->r.result.trace.converged) ? 1 : 0;
}

int lapshot_infer_result_monotone(const lapshot_infer_result* r) {
  return (r != nullptr && r->r.result.trace.monotone) ? 1 : 0;
}

double lapshot_infer_result_objective(const lapshot_infer_result* r,
                                      uint32_t i) {
  if (r == nullptr || i >= r->r.result.trace.objective_values.size()) {
    return 0.0;
  }
  return r->r.result.trace.objective_values[i];
}

double lapshot_infer_result_accuracy(const lapshot_infer_result* r) {
  return r == nullptr ? -1.0 : r->r.accuracy;
}

lapshot_status lapshot_infer_result_render(const lapshot_infer_result* r,
                                           char** out_text) {
  if (r == nullptr || out_text == nullptr) {
    return fail_argument("infer_result_render: null pointer");
  }
  return guarded([&] {
    assign_string(out_text,
                  lapshot::render_infer_report(r->r, r->config,
                                               r->wall_seconds));
  });
}

lapshot_status lapshot_infer_result_labels_csv(const lapshot_infer_result* r,
                                               char** out_text) {
  if (r == nullptr || out_text == nullptr) {
    return fail_argument("infer_result_labels_csv: null pointer");
  }
  return guarded([&] {
    assign_string(out_text, lapshot::render_labels_csv(r->r, r->query_ids));
  });
}

void lapshot_infer_result_free(lapshot_infer_result* r) { delete r; }

/* ---- episode benchmark ---- */

lapshot_status lapshot_bench(const lapshot_features* pool,
                             const lapshot_config* config, int method,
                             lapshot_bench_report** out) {
  if (pool == nullptr || config == nullptr || out == nullptr) {
    return fail_argument("bench: null pointer");
  }
  if (method != 0 && method != 1) {
    return fail_argument("bench: method must be 0 (laplacian) or 1 (nearest)");
  }
  return guarded([&] {
    auto report = std::make_unique<lapshot_bench_report>();
    report->rep = lapshot::run_benchmark(
        pool->m, config->rc.episode, config->rc.inference,
        method == 0 ? lapshot::Method::kLaplacian
                    : lapshot::Method::kNearestPrototype,
        config->rc.threads);
    *out = report.release();
  });
}

double lapshot_bench_report_accuracy(const lapshot_bench_report* r) {
  return r == nullptr ? -1.0 : r->rep.mean_accuracy;
}

double lapshot_bench_report_ci95(const lapshot_bench_report* r) {
  return r == nullptr ? -1.0 : r->rep.ci95_half_width;
}

double lapshot_bench_report_mean_iterations(const lapshot_bench_report* r) {
  return r == nullptr ? -1.0 : r->rep.mean_iterations;
}

double lapshot_bench_report_mean_wall_seconds(const lapshot_bench_report* r) {
  return r == nullptr ? -1.0 : r->rep.mean_wall_seconds;
}

lapshot_status lapshot_bench_report_render(const lapshot_bench_report* r,
                                           int include_episodes,
                                           char** out_text) {
  if (r == nullptr || out_text == nullptr) {
    return fail_argument("bench_report_render: null pointer");
  }
  return guarded([&] {
    assign_string(out_text,
                  lapshot::render_report(r->rep, include_episodes != 0));
  });
}

lapshot_status lapshot_bench_report_render_csv(const lapshot_bench_report* r,
                                               char** out_text) {
  if (r == nullptr || out_text == nullptr) {
    return fail_argument("bench_report_render_csv: null pointer");
  }
  return guarded(
      [&] { assign_string(out_text, lapshot::render_episodes_csv(r->rep)); });
}

void lapshot_bench_report_free(lapshot_bench_report* r) { delete r; }

lapshot_status lapshot_time(const lapshot_features* pool,
                            const lapshot_config* config,
                            double* mean_seconds_laplacian,
                            double* mean_seconds_nearest) {
  if (pool == nullptr || config == nullptr ||
      mean_seconds_laplacian == nullptr || mean_seconds_nearest == nullptr) {
    return fail_argument("time: null pointer");
  }
  return guarded([&] {
    const lapshot::TimingResult timing = lapshot::time_inference(
        pool->m, config->rc.episode, config->rc.inference);
    *mean_seconds_laplacian = timing.mean_seconds_laplacian;
    *mean_seconds_nearest = timing.mean_seconds_nearest_prototype;
  });
}

/* ---- lambda tuning ---- */

lapshot_status lapshot_tune(const lapshot_features* pool,
                            const lapshot_config* config, const double* grid,
                            size_t grid_len, lapshot_tune_result** out) {
  if (pool == nullptr || config == nullptr || out == nullptr) {
    return fail_argument("tune: null pointer");
  }
  if (grid == nullptr && grid_len != 0) {
    return fail_argument("tune: null grid with nonzero length");
  }
  return guarded([&] {
    std::span<const double> span_grid =
        grid_len > 0 ? std::span<const double>(grid, grid_len)
                     : std::span<const double>(config->rc.lambda_grid);
    auto result = std::make_unique<lapshot_tune_result>();
    result->t =
        lapshot::tune_lambda(pool->m, config->rc.episode, config->rc.inference,
                             span_grid, config->rc.threads);
    *out = result.release();
  });
}

double lapshot_tune_best_lambda(const lapshot_tune_result* r) {
  return r == nullptr ? -1.0 : r->t.best_lambda;
}

size_t lapshot_tune_size(const lapshot_tune_result* r) {
  return r == nullptr ? 0 : r->t.table.size();
}

double lapshot_tune_lambda_at(const lapshot_tune_result* r, size_t i) {
  if (r == nullptr || i >= r->t.table.size()) return -1.0;
  return r->t.table[i].lambda;
}

double lapshot_tune_accuracy_at(const lapshot_tune_result* r, size_t i) {
  if (r == nullptr || i >= r->t.table.size()) return -1.0;
  return r->t.table[i].mean_accuracy;
}

lapshot_status lapshot_tune_result_render(const lapshot_tune_result* r,
                                          char** out_text) {
  if (r == nullptr || out_text == nullptr) {
    return fail_argument("tune_result_render: null pointer");
  }
  return guarded(
      [&] { assign_string(out_text, lapshot::render_tune_report(r->t)); });
}

void lapshot_tune_result_free(lapshot_tune_result* r) { delete r; }

}  // extern "C"
