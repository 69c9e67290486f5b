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

#include <optional>

#include "lapshot/core.hpp"
#include "lapshot/solver.hpp"

namespace lapshot {

// Which classifier closes the pipeline. Nearest-prototype is the inductive
// baseline: identical preprocessing, no graph and no iterations.
enum class Method { kLaplacian, kNearestPrototype };

struct PipelineResult {
  SolveResult result;
  // Predicted labels mapped back to the original label values.
  std::vector<std::int32_t> predicted_labels;
  std::vector<std::int32_t> label_map;
  bool knn_clamped = false;
  std::size_t zero_norm_rows = 0;
  std::optional<std::vector<double>> shift_delta;
  // Filled only when the query set carries ground truth; -1 otherwise.
  double accuracy = -1.0;
  double per_class_accuracy = -1.0;
};

// Runs one task end to end: label remap, normalization, optional shift
// correction, prototype estimation, optional rectification, graph build
// and the solve (or the nearest-prototype decision for the baseline).
// CL2 normalization takes its centering vector from the support features'
// bundled base_mean, falling back to the query's; absence is an error.
PipelineResult run_pipeline(const FewShotTask& task,
                            const InferenceConfig& config,
                            Method method = Method::kLaplacian);

}  // namespace lapshot
