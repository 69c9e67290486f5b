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

#include "lapshot/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace lapshot {

bool Matrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void FeatureMatrix::validate(const std::string& context) const {
  if (!data.all_finite()) {
    throw InvalidArgumentError(context + ": non-finite feature value");
  }
  if (labels && labels->size() != rows()) {
    throw InvalidArgumentError(context + ": label count " +
                               std::to_string(labels->size()) +
                               " does not match row count " +
                               std::to_string(rows()));
  }
  if (!ids.empty() && ids.size() != rows()) {
    throw InvalidArgumentError(context + ": id count does not match rows");
  }
  if (base_mean && base_mean->size() != dim()) {
    throw InvalidArgumentError(context + ": base_mean dimension " +
                               std::to_string(base_mean->size()) +
                               " does not match feature dimension " +
                               std::to_string(dim()));
  }
}

FewShotTask remap_labels(FewShotTask task) {
  if (!task.support.has_labels()) {
    throw InvalidTaskError("support set has no labels");
  }
  if (task.support.dim() != task.query.dim()) {
    throw InvalidTaskError("support dimension " +
                           std::to_string(task.support.dim()) +
                           " does not match query dimension " +
                           std::to_string(task.query.dim()));
  }

  const std::vector<std::int32_t>& support_labels = *task.support.labels;
  std::set<std::int32_t> distinct(support_labels.begin(),
                                  support_labels.end());
  if (distinct.size() < 2) {
    throw InvalidTaskError("task needs at least 2 distinct classes, got " +
                           std::to_string(distinct.size()));
  }

  std::map<std::int32_t, std::int32_t> to_class_id;
  std::vector<std::int32_t> ascending(distinct.begin(), distinct.end());
  for (std::size_t c = 0; c < ascending.size(); ++c) {
    to_class_id[ascending[c]] = static_cast<std::int32_t>(c);
  }

  const std::size_t num_classes = ascending.size();
  std::vector<std::size_t> shots(num_classes, 0);
  std::vector<std::int32_t> remapped_support(support_labels.size());
  for (std::size_t i = 0; i < support_labels.size(); ++i) {
    const std::int32_t c = to_class_id[support_labels[i]];
    remapped_support[i] = c;
    ++shots[static_cast<std::size_t>(c)];
  }

  if (task.query.has_labels()) {
    std::vector<std::int32_t>& q = *task.query.labels;
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto it = to_class_id.find(q[i]);
      if (it == to_class_id.end()) {
        throw InvalidTaskError("query row " + std::to_string(i) + " has label " +
                               std::to_string(q[i]) +
                               " absent from the support set");
      }
      q[i] = it->second;
    }
  }

  // Compose with an existing mapping so a second application is a no-op on
  // the recorded table.
  std::vector<std::int32_t> label_map(num_classes);
  if (task.label_map.empty()) {
    label_map = ascending;
  } else {
    for (std::size_t c = 0; c < num_classes; ++c) {
      const auto prev = static_cast<std::size_t>(ascending[c]);
      if (prev >= task.label_map.size()) {
        throw InvalidTaskError("existing label map does not cover label " +
                               std::to_string(ascending[c]));
      }
      label_map[c] = task.label_map[prev];
    }
  }

  task.support.labels = std::move(remapped_support);
  task.num_classes = num_classes;
  task.shots_per_class = std::move(shots);
  task.label_map = std::move(label_map);
  return task;
}

const char* to_string(Distance d) {
  switch (d) {
    case Distance::kEuclidean:
      return "euclidean";
    case Distance::kSquaredEuclidean:
      return "squared_euclidean";
    case Distance::kCosineDistance:
      return "cosine_distance";
  }
  return "euclidean";
}

const char* to_string(Normalization n) {
  switch (n) {
    case Normalization::kNone:
      return "none";
    case Normalization::kL2:
      return "l2";
    case Normalization::kCl2:
      return "cl2";
  }
  return "none";
}

Distance distance_from_string(const std::string& s) {
  if (s == "euclidean") return Distance::kEuclidean;
  if (s == "squared_euclidean") return Distance::kSquaredEuclidean;
  if (s == "cosine_distance") return Distance::kCosineDistance;
  throw ParseError("unknown distance '" + s +
                   "' (expected euclidean, squared_euclidean or "
                   "cosine_distance)");
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "none") return Normalization::kNone;
  if (s == "l2") return Normalization::kL2;
  if (s == "cl2") return Normalization::kCl2;
  throw ParseError("unknown normalization '" + s +
                   "' (expected none, l2 or cl2)");
}

void InferenceConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgumentError("lambda must be finite and >= 0");
  }
  if (knn < 1) {
    throw InvalidArgumentError("knn must be >= 1");
  }
  if (!(rel_tolerance > 0.0)) {
    throw InvalidArgumentError("rel_tolerance must be > 0");
  }
  if (max_iterations < 1) {
    throw InvalidArgumentError("max_iterations must be >= 1");
  }
}

double cosine_similarity(std::span<const double> a, std::span<const double> b,
                         bool* zero_norm) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    if (zero_norm != nullptr) *zero_norm = true;
    return 0.0;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double point_distance(std::span<const double> a, std::span<const double> b,
                      Distance metric, bool* zero_norm) {
  if (a.size() != b.size()) {
    throw DimMismatchError("point dimensions differ: " +
                           std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
  }
  switch (metric) {
    case Distance::kEuclidean:
    case Distance::kSquaredEuclidean: {
      double sq = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
      }
      return metric == Distance::kEuclidean ? std::sqrt(sq) : sq;
    }
    case Distance::kCosineDistance:
      return 1.0 - cosine_similarity(a, b, zero_norm);
  }
  return 0.0;
}

std::size_t Rng::next_index(std::size_t bound) {
  if (bound == 0) {
    throw InvalidArgumentError("next_index bound must be positive");
  }
  const std::uint64_t b = bound;
  const std::uint64_t threshold = (-b) % b;  // 2^64 mod bound
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x < threshold);
  return static_cast<std::size_t>(x % b);
}

double Rng::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms.
  double u1;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(theta);
  has_cached_gaussian_ = true;
  return r * std::cos(theta);
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n,
                                                         std::size_t k) {
  if (k > n) {
    throw InvalidArgumentError("cannot sample " + std::to_string(k) +
                               " items from " + std::to_string(n));
  }
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + next_index(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::uint64_t Rng::derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace lapshot
