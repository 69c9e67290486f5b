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

#include <cstdint>
#include <span>
#include <vector>

#include "lapshot/core.hpp"

namespace lapshot {

// Sparse binary k-NN affinity over the query set, stored CSR-style. Edge
// weights are implicitly 1, so a node's degree is the length of its
// neighbor list. Never contains self-loops.
struct AffinityGraph {
  std::size_t n = 0;
  std::vector<std::uint32_t> offsets;    // size n + 1
  std::vector<std::uint32_t> neighbors;  // ascending within each row
  bool symmetric = false;
  bool k_clamped = false;  // k was silently reduced to n - 1

  std::span<const std::uint32_t> neighbors_of(std::size_t q) const {
    return {neighbors.data() + offsets[q],
            static_cast<std::size_t>(offsets[q + 1] - offsets[q])};
  }
  std::size_t degree(std::size_t q) const {
    return offsets[q + 1] - offsets[q];
  }
  std::size_t edge_count() const { return neighbors.size(); }
};

// Exact brute-force k-NN under Euclidean distance on the given features
// (normalize beforehand if configured). Distance ties break by ascending
// node index. k is clamped to n - 1. With `symmetrize`, the directed edge
// set is replaced by its union with its transpose and degrees change
// accordingly; otherwise every node keeps exactly min(k, n-1) neighbors.
AffinityGraph build_knn_graph(const FeatureMatrix& features, int k,
                              bool symmetrize);

// -sum_q sum_{p in neighbors(q)} y_q . y_p, the sparse relaxed Laplacian
// coupling term (degrees excluded: they are constant in the relaxation).
double pairwise_term(const AffinityGraph& graph, const SoftAssignment& y);

}  // namespace lapshot
