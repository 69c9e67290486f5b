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

// Test-only reference implementations. Everything here is written as the
// plainest possible loop over dense data, independent of the sparse
// production paths it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lapshot/core.hpp"
#include "lapshot/graph.hpp"
#include "lapshot/solver.hpp"

namespace lapshot::testing {

// Exact k nearest neighbors of every row by full pairwise scan and stable
// sort on (distance, index).
inline std::vector<std::vector<std::uint32_t>> brute_force_knn(
    const FeatureMatrix& features, std::size_t k) {
  const std::size_t n = features.rows();
  std::vector<std::vector<std::uint32_t>> result(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::pair<double, std::uint32_t>> order;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == q) continue;
      double sq = 0.0;
      for (std::size_t i = 0; i < features.dim(); ++i) {
        const double d = features.data(q, i) - features.data(p, i);
        sq += d * d;
      }
      order.emplace_back(sq, static_cast<std::uint32_t>(p));
    }
    std::sort(order.begin(), order.end());
    const std::size_t take = std::min(k, order.size());
    result[q].resize(take);
    for (std::size_t i = 0; i < take; ++i) result[q][i] = order[i].second;
    std::sort(result[q].begin(), result[q].end());
  }
  return result;
}

// Dense N x N copy of a binary affinity graph.
inline std::vector<std::vector<double>> dense_from_graph(
    const AffinityGraph& graph) {
  std::vector<std::vector<double>> w(graph.n,
                                     std::vector<double>(graph.n, 0.0));
  for (std::size_t q = 0; q < graph.n; ++q) {
    for (std::uint32_t p : graph.neighbors_of(q)) w[q][p] = 1.0;
  }
  return w;
}

// -sum_{q,p} w[q][p] y_q . y_p by triple loop (equals -tr(Y^T W Y) for
// symmetric W).
inline double dense_pairwise_term(const std::vector<std::vector<double>>& w,
                                  const Matrix& y) {
  double total = 0.0;
  for (std::size_t q = 0; q < w.size(); ++q) {
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (w[q][p] == 0.0) continue;
      double dot = 0.0;
      for (std::size_t c = 0; c < y.cols(); ++c) dot += y(q, c) * y(p, c);
      total += w[q][p] * dot;
    }
  }
  return -total;
}

// Symmetric positive semi-definite Gaussian-kernel affinity,
// w[q][p] = exp(-||x_q - x_p||^2 / (2 h^2)). Used for the bound-validity
// and monotonicity checks, which assume PSD W.
inline std::vector<std::vector<double>> gaussian_kernel(
    const FeatureMatrix& features, double bandwidth) {
  const std::size_t n = features.rows();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      double sq = 0.0;
      for (std::size_t i = 0; i < features.dim(); ++i) {
        const double d = features.data(q, i) - features.data(p, i);
        sq += d * d;
      }
      w[q][p] = std::exp(-sq / (2.0 * bandwidth * bandwidth));
    }
  }
  return w;
}

// b[q] = sum_p w[q][p] y_p, densely.
inline Matrix dense_pairwise_potentials(
    const std::vector<std::vector<double>>& w, const Matrix& y) {
  Matrix b(y.rows(), y.cols(), 0.0);
  for (std::size_t q = 0; q < w.size(); ++q) {
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (w[q][p] == 0.0) continue;
      for (std::size_t c = 0; c < y.cols(); ++c) {
        b(q, c) += w[q][p] * y(p, c);
      }
    }
  }
  return b;
}

// Straight-line dense mirror of the iterative solver: same update rule and
// stopping test, no sparse structures shared with the production path.
struct DenseSolveResult {
  Matrix y;
  std::vector<std::int32_t> labels;
  std::vector<double> objectives;
  int iterations = 0;
  bool converged = false;
};

inline double dense_objective(const Matrix& y, const Matrix& a,
                              const std::vector<std::vector<double>>& w,
                              double lambda) {
  double total = 0.0;
  for (std::size_t q = 0; q < y.rows(); ++q) {
    for (std::size_t c = 0; c < y.cols(); ++c) {
      const double p = y(q, c);
      if (p > 0.0) total += p * std::log(std::max(p, 1e-300));
      total += p * a(q, c);
    }
  }
  return total + 0.5 * lambda * dense_pairwise_term(w, y);
}

inline Matrix dense_softmax_rows(const Matrix& scores) {
  Matrix y = scores;
  for (std::size_t q = 0; q < y.rows(); ++q) {
    double mx = y(q, 0);
    for (std::size_t c = 1; c < y.cols(); ++c) mx = std::max(mx, y(q, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < y.cols(); ++c) {
      y(q, c) = std::exp(y(q, c) - mx);
      sum += y(q, c);
    }
    for (std::size_t c = 0; c < y.cols(); ++c) y(q, c) /= sum;
  }
  return y;
}

inline DenseSolveResult dense_solve(const Matrix& a,
                                    const std::vector<std::vector<double>>& w,
                                    double lambda, int max_iterations,
                                    double rel_tolerance) {
  DenseSolveResult result;
  Matrix scores(a.rows(), a.cols());
  for (std::size_t q = 0; q < a.rows(); ++q) {
    for (std::size_t c = 0; c < a.cols(); ++c) scores(q, c) = -a(q, c);
  }
  result.y = dense_softmax_rows(scores);
  double objective = dense_objective(result.y, a, w, lambda);
  result.objectives.push_back(objective);

  for (int iter = 1; iter <= max_iterations; ++iter) {
    const Matrix b = dense_pairwise_potentials(w, result.y);
    for (std::size_t q = 0; q < a.rows(); ++q) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        scores(q, c) = lambda * b(q, c) - a(q, c);
      }
    }
    result.y = dense_softmax_rows(scores);
    const double next = dense_objective(result.y, a, w, lambda);
    result.objectives.push_back(next);
    result.iterations = iter;
    if (std::abs(next - objective) <=
        rel_tolerance * (std::abs(objective) + 1.0)) {
      result.converged = true;
      break;
    }
    objective = next;
  }

  result.labels.resize(result.y.rows());
  for (std::size_t q = 0; q < result.y.rows(); ++q) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < result.y.cols(); ++c) {
      if (result.y(q, c) > result.y(q, best)) best = c;
    }
    result.labels[q] = static_cast<std::int32_t>(best);
  }
  return result;
}

// ---- random instance helpers ----

inline FeatureMatrix random_features(Rng& rng, std::size_t rows,
                                     std::size_t dim, double scale = 1.0) {
  FeatureMatrix f;
  f.data = Matrix(rows, dim);
  for (double& v : f.data.values()) v = scale * rng.next_gaussian();
  return f;
}

inline Matrix random_simplex_rows(Rng& rng, std::size_t rows,
                                  std::size_t cols) {
  Matrix y(rows, cols);
  for (std::size_t q = 0; q < rows; ++q) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      y(q, c) = -std::log(1.0 - rng.next_double());
      sum += y(q, c);
    }
    for (std::size_t c = 0; c < cols; ++c) y(q, c) /= sum;
  }
  return y;
}

inline Matrix random_one_hot_rows(Rng& rng, std::size_t rows,
                                  std::size_t cols) {
  Matrix y(rows, cols, 0.0);
  for (std::size_t q = 0; q < rows; ++q) {
    y(q, rng.next_index(cols)) = 1.0;
  }
  return y;
}

// Small labeled task with Gaussian class clusters; support gets
// `shots` rows per class, query gets `queries` rows per class.
inline FewShotTask random_task(Rng& rng, std::size_t classes, std::size_t dim,
                               std::size_t shots, std::size_t queries,
                               double center_scale = 3.0, double sigma = 1.0) {
  Matrix centers(classes, dim);
  for (double& v : centers.values()) {
    v = rng.next_uniform(-center_scale, center_scale);
  }
  FewShotTask task;
  task.support.data = Matrix(classes * shots, dim);
  task.query.data = Matrix(classes * queries, dim);
  std::vector<std::int32_t> support_labels, query_labels;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t s = 0; s < shots; ++s) {
      auto row = task.support.data.row(c * shots + s);
      for (std::size_t i = 0; i < dim; ++i) {
        row[i] = centers(c, i) + sigma * rng.next_gaussian();
      }
      support_labels.push_back(static_cast<std::int32_t>(c));
    }
    for (std::size_t s = 0; s < queries; ++s) {
      auto row = task.query.data.row(c * queries + s);
      for (std::size_t i = 0; i < dim; ++i) {
        row[i] = centers(c, i) + sigma * rng.next_gaussian();
      }
      query_labels.push_back(static_cast<std::int32_t>(c));
    }
  }
  task.support.labels = std::move(support_labels);
  task.query.labels = std::move(query_labels);
  return remap_labels(std::move(task));
}

}  // namespace lapshot::testing
