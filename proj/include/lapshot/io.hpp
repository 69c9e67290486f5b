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

#pragma once

#include <string>
#include <vector>

#include "lapshot/bench.hpp"
#include "lapshot/core.hpp"
#include "lapshot/pipeline.hpp"

namespace lapshot {

// Binary feature file (all integers and floats little-endian):
//
//   offset  size  field
//   0       4     magic "LSFT"
//   4       4     version, u32, must be 1
//   8       4     n_rows, u32
//   12      4     dim, u32
//   16      4     flags, u32; bit 0: labels present, bit 1: base mean
//   20      ...   n_rows records: [i32 label] dim * f32
//   ...     ...   if flag bit 1: dim * f32 base mean
//
// Declared sizes must match the file length exactly. Values are promoted
// to f64 in memory; NaN/Inf payloads are rejected with the byte offset.
inline constexpr char kFeatureMagic[4] = {'L', 'S', 'F', 'T'};
inline constexpr std::uint32_t kFeatureVersion = 1;

FeatureMatrix read_features_binary(const std::string& path);
void write_features_binary(const FeatureMatrix& features,
                           const std::string& path);

// CSV with header `id,label,f0,...,f{M-1}`; the label column is optional.
// No quoting: ids must not contain commas.
FeatureMatrix read_features_csv(const std::string& path);
void write_features_csv(const FeatureMatrix& features,
                        const std::string& path);

// Dispatches on extension: .csv reads as CSV, everything else as binary.
FeatureMatrix read_features(const std::string& path);
void write_features(const FeatureMatrix& features, const std::string& path);

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

// Flat key=value document (one pair per line, `#` comments). Keys mirror
// the InferenceConfig and EpisodeSpec field names verbatim plus input and
// output paths. Unknown keys are rejected.
struct RunConfig {
  InferenceConfig inference;
  EpisodeSpec episode;
  std::string pool;
  std::string support;
  std::string query;
  std::string output;
  std::string report;
  std::string episodes_csv;
  int threads = 1;
  bool per_episode = false;
  std::vector<double> lambda_grid{kDefaultLambdaGrid.begin(),
                                  kDefaultLambdaGrid.end()};
  std::vector<int> knn_grid;
};

// Applies one key/value pair; throws ParseError on unknown keys or
// malformed values. Shared by the config-file parser, the C API setter
// and CLI flag overrides.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin = "<string>");

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

// "84.13 ± 0.14": accuracy and CI half-width in percent, two decimals.
std::string format_accuracy(double accuracy, double ci_half_width);

// Human-readable benchmark report. Deterministic for a fixed root seed
// except for lines starting with "wall_", which carry measured times.
// `include_episodes` appends the per-episode table (no timing columns).
std::string render_report(const EpisodeReport& report, bool include_episodes);

// Machine-readable per-episode records. Field order:
// episode,seed,accuracy,per_class_accuracy,iterations,converged,monotone,
// wall_seconds,label_map (label_map values joined by ';').
std::string render_episodes_csv(const EpisodeReport& report);

std::string render_tune_report(const TuneResult& tune);

// Single-task inference report (config echo, trace summary, prediction
// stats). Deterministic except for "wall_" lines.
std::string render_infer_report(const PipelineResult& result,
                                const InferenceConfig& config,
                                double wall_seconds);

// Predicted labels as CSV `id,predicted_label`, in query row order.
std::string render_labels_csv(const PipelineResult& result,
                              const std::vector<std::string>& query_ids);

void write_report(const EpisodeReport& report, const std::string& path,
                  bool include_episodes = false);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace lapshot
