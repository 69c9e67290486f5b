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

#include "lapshot/prototype.hpp"

#include <cmath>
#include <limits>

namespace lapshot {

FeatureMatrix normalize_l2(const FeatureMatrix& features,
                           std::vector<std::size_t>* zero_rows) {
  FeatureMatrix out = features;
  const std::size_t m = out.dim();
  for (std::size_t q = 0; q < out.rows(); ++q) {
    auto row = out.data.row(q);
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) sq += row[i] * row[i];
    if (sq == 0.0) {
      if (zero_rows != nullptr) zero_rows->push_back(q);
      continue;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t i = 0; i < m; ++i) row[i] *= inv;
  }
  return out;
}

FeatureMatrix normalize_cl2(const FeatureMatrix& features,
                            std::span<const double> base_mean,
                            std::vector<std::size_t>* zero_rows) {
  if (base_mean.size() != features.dim()) {
    throw DimMismatchError("base_mean dimension " +
                           std::to_string(base_mean.size()) +
                           " does not match feature dimension " +
                           std::to_string(features.dim()));
  }
  FeatureMatrix centered = features;
  const std::size_t m = centered.dim();
  for (std::size_t q = 0; q < centered.rows(); ++q) {
    auto row = centered.data.row(q);
    for (std::size_t i = 0; i < m; ++i) row[i] -= base_mean[i];
  }
  return normalize_l2(centered, zero_rows);
}

PrototypeSet mean_prototypes(const FewShotTask& task) {
  if (!task.support.has_labels()) {
    throw InvalidTaskError("support set has no labels");
  }
  const std::size_t c_count = task.num_classes;
  if (c_count == 0) {
    throw InvalidTaskError("task has no classes; run remap_labels first");
  }
  const std::size_t m = task.support.dim();

  PrototypeSet protos;
  protos.kind = PrototypeSet::Kind::kPlain;
  protos.vectors = Matrix(c_count, m, 0.0);
  std::vector<std::size_t> counts(c_count, 0);

  const auto& labels = *task.support.labels;
  for (std::size_t q = 0; q < task.support.rows(); ++q) {
    const auto c = static_cast<std::size_t>(labels[q]);
    if (c >= c_count) {
      throw InvalidTaskError("support label out of range; run remap_labels");
    }
    const auto row = task.support.row(q);
    auto proto = protos.vectors.row(c);
    for (std::size_t i = 0; i < m; ++i) proto[i] += row[i];
    ++counts[c];
  }
  for (std::size_t c = 0; c < c_count; ++c) {
    if (counts[c] == 0) {
      throw InvalidTaskError("class " + std::to_string(c) +
                             " has no support examples");
    }
    auto proto = protos.vectors.row(c);
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < m; ++i) proto[i] *= inv;
  }
  return protos;
}

std::pair<FewShotTask, ShiftVector> shift_correction(const FewShotTask& task) {
  const std::size_t m = task.support.dim();
  if (task.query.dim() != m) {
    throw DimMismatchError("support/query dimensions differ");
  }
  if (task.support.rows() == 0 || task.query.rows() == 0) {
    throw InvalidTaskError("shift correction needs non-empty support and query");
  }

  ShiftVector shift;
  shift.delta.assign(m, 0.0);
  for (std::size_t q = 0; q < task.support.rows(); ++q) {
    const auto row = task.support.row(q);
    for (std::size_t i = 0; i < m; ++i) shift.delta[i] += row[i];
  }
  const double inv_s = 1.0 / static_cast<double>(task.support.rows());
  for (std::size_t i = 0; i < m; ++i) shift.delta[i] *= inv_s;

  std::vector<double> query_mean(m, 0.0);
  for (std::size_t q = 0; q < task.query.rows(); ++q) {
    const auto row = task.query.row(q);
    for (std::size_t i = 0; i < m; ++i) query_mean[i] += row[i];
  }
  const double inv_q = 1.0 / static_cast<double>(task.query.rows());
  for (std::size_t i = 0; i < m; ++i) shift.delta[i] -= query_mean[i] * inv_q;

  FewShotTask shifted = task;
  for (std::size_t q = 0; q < shifted.query.rows(); ++q) {
    auto row = shifted.query.data.row(q);
    for (std::size_t i = 0; i < m; ++i) row[i] += shift.delta[i];
  }
  return {std::move(shifted), std::move(shift)};
}

PrototypeSet rectify_prototypes(const FewShotTask& task,
                                const PrototypeSet& protos, Distance metric,
                                std::vector<std::size_t>* zero_norm_rows) {
  if (protos.kind != PrototypeSet::Kind::kPlain) {
    throw InvalidArgumentError("rectification expects plain prototypes");
  }
  const std::size_t c_count = protos.classes();
  const std::size_t m = protos.dim();
  if (task.support.dim() != m || task.query.dim() != m) {
    throw DimMismatchError("prototype dimension does not match task features");
  }

  // Predicted partition of the query set: nearest plain prototype, ties to
  // the lowest class id.
  std::vector<std::size_t> predicted(task.query.rows());
  for (std::size_t q = 0; q < task.query.rows(); ++q) {
    const auto row = task.query.row(q);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < c_count; ++c) {
      const double d = point_distance(row, protos.vectors.row(c), metric);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    predicted[q] = best_c;
  }

  std::vector<std::size_t> member_count(c_count, 0);
  for (std::size_t q = 0; q < task.support.rows(); ++q) {
    ++member_count[static_cast<std::size_t>((*task.support.labels)[q])];
  }
  for (std::size_t c : predicted) ++member_count[c];

  PrototypeSet rectified;
  rectified.kind = PrototypeSet::Kind::kRectified;
  rectified.vectors = Matrix(c_count, m, 0.0);

  std::vector<double> sims(c_count);
  auto accumulate = [&](std::span<const double> x, std::size_t target_class,
                        std::size_t row_index, bool is_query) {
    bool zero = false;
    for (std::size_t c = 0; c < c_count; ++c) {
      sims[c] = cosine_similarity(x, protos.vectors.row(c), &zero);
    }
    if (zero && zero_norm_rows != nullptr) {
      zero_norm_rows->push_back(is_query ? task.support.rows() + row_index
                                         : row_index);
    }
    double max_sim = sims[0];
    for (std::size_t c = 1; c < c_count; ++c) max_sim = std::max(max_sim, sims[c]);
    double denom = 0.0;
    for (std::size_t c = 0; c < c_count; ++c) denom += std::exp(sims[c] - max_sim);
    const double weight = std::exp(sims[target_class] - max_sim) / denom;

    auto proto = rectified.vectors.row(target_class);
    for (std::size_t i = 0; i < m; ++i) proto[i] += weight * x[i];
  };

  for (std::size_t q = 0; q < task.support.rows(); ++q) {
    const auto c = static_cast<std::size_t>((*task.support.labels)[q]);
    accumulate(task.support.row(q), c, q, false);
  }
  for (std::size_t q = 0; q < task.query.rows(); ++q) {
    accumulate(task.query.row(q), predicted[q], q, true);
  }

  for (std::size_t c = 0; c < c_count; ++c) {
    // Classes with no support would have been rejected earlier, so the
    // member count is always positive.
    auto proto = rectified.vectors.row(c);
    const double inv = 1.0 / static_cast<double>(member_count[c]);
    for (std::size_t i = 0; i < m; ++i) proto[i] *= inv;
  }
  return rectified;
}

}  // namespace lapshot
