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

#include <span>
#include <utility>
#include <vector>

#include "lapshot/core.hpp"

namespace lapshot {

// Per-class prototype vectors, one row per class id.
struct PrototypeSet {
  enum class Kind { kPlain, kRectified };

  Matrix vectors;  // C x M
  Kind kind = Kind::kPlain;

  std::size_t classes() const noexcept { return vectors.rows(); }
  std::size_t dim() const noexcept { return vectors.cols(); }
};

// Support-mean minus query-mean, added to every query row by
// shift_correction.
struct ShiftVector {
  std::vector<double> delta;
};

// Divides each row by its Euclidean norm. Zero-norm rows are left unchanged
// and their indices appended to `zero_rows` when provided.
FeatureMatrix normalize_l2(const FeatureMatrix& features,
                           std::vector<std::size_t>* zero_rows = nullptr);

// Subtracts `base_mean` from every row, then L2-normalizes.
FeatureMatrix normalize_cl2(const FeatureMatrix& features,
                            std::span<const double> base_mean,
                            std::vector<std::size_t>* zero_rows = nullptr);

// Plain prototypes: row c is the arithmetic mean of class-c support rows.
PrototypeSet mean_prototypes(const FewShotTask& task);

// Aligns the query mean with the support mean: delta = mean(support) -
// mean(query), added to every query row. Support rows are untouched.
std::pair<FewShotTask, ShiftVector> shift_correction(const FewShotTask& task);

// Rectified prototypes: queries are first partitioned by nearest plain
// prototype under `metric`; each class prototype is then recomputed as the
// sum of its support members and predicted queries, each point weighted by
// the softmax (over classes) of its cosine similarity to the plain
// prototypes, divided by the member count. Zero-norm vectors contribute
// cosine 0 and are flagged via `zero_norm_rows` when provided.
PrototypeSet rectify_prototypes(const FewShotTask& task,
                                const PrototypeSet& protos, Distance metric,
                                std::vector<std::size_t>* zero_norm_rows = nullptr);

}  // namespace lapshot
