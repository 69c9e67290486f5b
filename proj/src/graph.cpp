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

#include "lapshot/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lapshot {

namespace {

// Squared Euclidean distances from row q to every other row, using
// precomputed squared norms: ||a - b||^2 = ||a||^2 + ||b||^2 - 2 a.b.
// Clamped at zero since cancellation can drive tiny negatives.
void squared_distances_from(const Matrix& data,
                            const std::vector<double>& sq_norms,
                            std::size_t q, std::vector<double>& out) {
  const std::size_t n = data.rows();
  const std::size_t m = data.cols();
  const double* base = data.values().data();
  const double* xq = base + q * m;
  for (std::size_t p = 0; p < n; ++p) {
    const double* xp = base + p * m;
    double dot = 0.0;
    for (std::size_t i = 0; i < m; ++i) dot += xq[i] * xp[i];
    out[p] = std::max(0.0, sq_norms[q] + sq_norms[p] - 2.0 * dot);
  }
}

}  // namespace

AffinityGraph build_knn_graph(const FeatureMatrix& features, int k,
                              bool symmetrize) {
  const std::size_t n = features.rows();
  if (n < 2) {
    throw GraphTooSmallError("k-NN graph needs at least 2 nodes, got " +
                             std::to_string(n));
  }
  if (k < 1) {
    throw InvalidArgumentError("k must be >= 1");
  }

  AffinityGraph graph;
  graph.n = n;
  std::size_t effective_k = static_cast<std::size_t>(k);
  if (effective_k > n - 1) {
    effective_k = n - 1;
    graph.k_clamped = true;
  }

  const std::size_t m = features.dim();
  std::vector<double> sq_norms(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    const auto row = features.row(q);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += row[i] * row[i];
    sq_norms[q] = s;
  }

  std::vector<std::vector<std::uint32_t>> lists(n);
  std::vector<double> dist(n);
  std::vector<std::pair<double, std::uint32_t>> order(n - 1);
  for (std::size_t q = 0; q < n; ++q) {
    squared_distances_from(features.data, sq_norms, q, dist);
    std::size_t w = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == q) continue;
      order[w++] = {dist[p], static_cast<std::uint32_t>(p)};
    }
    // (distance, index) pairs order ties by ascending node index.
    std::nth_element(order.begin(), order.begin() + (effective_k - 1),
                     order.end());
    lists[q].resize(effective_k);
    for (std::size_t i = 0; i < effective_k; ++i) {
      lists[q][i] = order[i].second;
    }
    std::sort(lists[q].begin(), lists[q].end());
  }

  if (symmetrize) {
    // W := max(W, W^T): union of directed edges.
    std::vector<std::vector<std::uint32_t>> incoming(n);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::uint32_t p : lists[q]) {
        incoming[p].push_back(static_cast<std::uint32_t>(q));
      }
    }
    for (std::size_t q = 0; q < n; ++q) {
      auto& list = lists[q];
      list.insert(list.end(), incoming[q].begin(), incoming[q].end());
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    graph.symmetric = true;
  }

  graph.offsets.resize(n + 1);
  graph.offsets[0] = 0;
  for (std::size_t q = 0; q < n; ++q) {
    graph.offsets[q + 1] =
        graph.offsets[q] + static_cast<std::uint32_t>(lists[q].size());
  }
  graph.neighbors.reserve(graph.offsets[n]);
  for (std::size_t q = 0; q < n; ++q) {
    graph.neighbors.insert(graph.neighbors.end(), lists[q].begin(),
                           lists[q].end());
  }
  return graph;
}

double pairwise_term(const AffinityGraph& graph, const SoftAssignment& y) {
  if (graph.n != y.rows()) {
    throw DimMismatchError("graph has " + std::to_string(graph.n) +
                           " nodes but assignment has " +
                           std::to_string(y.rows()) + " rows");
  }
  const std::size_t c = y.classes();
  double total = 0.0;
  for (std::size_t q = 0; q < graph.n; ++q) {
    const auto yq = y.probabilities.row(q);
    for (std::uint32_t p : graph.neighbors_of(q)) {
      const auto yp = y.probabilities.row(p);
      double dot = 0.0;
      for (std::size_t i = 0; i < c; ++i) dot += yq[i] * yp[i];
      total += dot;
    }
  }
  return -total;
}

}  // namespace lapshot
