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

#include "lapshot/pipeline.hpp"

#include <utility>

#include "lapshot/graph.hpp"
#include "lapshot/prototype.hpp"

namespace lapshot {

namespace {

void score(PipelineResult& out, const FewShotTask& task) {
  if (!task.query.has_labels()) return;
  const auto& truth = *task.query.labels;
  const auto& predicted = out.result.labels;

  std::size_t correct = 0;
  std::vector<std::size_t> class_total(task.num_classes, 0);
  std::vector<std::size_t> class_correct(task.num_classes, 0);
  for (std::size_t q = 0; q < truth.size(); ++q) {
    const auto c = static_cast<std::size_t>(truth[q]);
    ++class_total[c];
    if (predicted[q] == truth[q]) {
      ++correct;
      ++class_correct[c];
    }
  }
  out.accuracy = truth.empty()
                     ? 0.0
                     : static_cast<double>(correct) /
                           static_cast<double>(truth.size());

  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < task.num_classes; ++c) {
    if (class_total[c] == 0) continue;
    sum += static_cast<double>(class_correct[c]) /
           static_cast<double>(class_total[c]);
    ++present;
  }
  out.per_class_accuracy = present == 0 ? 0.0 : sum / static_cast<double>(present);
}

}  // namespace

PipelineResult run_pipeline(const FewShotTask& input,
                            const InferenceConfig& config, Method method) {
  config.validate();
  FewShotTask task = remap_labels(input);

  PipelineResult out;
  out.label_map = task.label_map;

  std::vector<std::size_t> zero_rows;
  switch (config.normalization) {
    case Normalization::kNone:
      break;
    case Normalization::kL2:
      task.support = normalize_l2(task.support, &zero_rows);
      task.query = normalize_l2(task.query, &zero_rows);
      break;
    case Normalization::kCl2: {
      const auto& mean = task.support.base_mean.has_value()
                             ? task.support.base_mean
                             : task.query.base_mean;
      if (!mean.has_value()) {
        throw MissingBaseMeanError(
            "cl2 normalization requested but no base mean is bundled with "
            "the features");
      }
      task.support = normalize_cl2(task.support, *mean, &zero_rows);
      task.query = normalize_cl2(task.query, *mean, &zero_rows);
      break;
    }
  }

  if (config.shift_correction) {
    auto [shifted, delta] = shift_correction(task);
    task = std::move(shifted);
    out.shift_delta = std::move(delta.delta);
  }

  PrototypeSet protos = mean_prototypes(task);
  if (config.rectify_prototypes) {
    protos = rectify_prototypes(task, protos, config.distance, &zero_rows);
  }
  out.zero_norm_rows = zero_rows.size();

  if (method == Method::kLaplacian) {
    AffinityGraph graph = build_knn_graph(task.query, config.knn,
                                          config.symmetrize_affinity);
    out.knn_clamped = graph.k_clamped;
    out.result = solve(task, protos, graph, config);
  } else {
    const UnaryPotentials a =
        unary_potentials(task.query, protos, config.distance);
    out.result.labels = nearest_prototype_labels(a);
    out.result.assignment = initialize_assignment(a);
    out.result.trace.iterations = 0;
    out.result.trace.converged = true;
  }

  out.predicted_labels.resize(out.result.labels.size());
  for (std::size_t q = 0; q < out.result.labels.size(); ++q) {
    out.predicted_labels[q] =
        out.label_map[static_cast<std::size_t>(out.result.labels[q])];
  }
  score(out, task);
  return out;
}

}  // namespace lapshot
